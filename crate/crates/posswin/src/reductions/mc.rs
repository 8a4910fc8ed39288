use super::ReductionError;

/// A vertex as (color class, index within class).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub color: usize,
    pub index: usize,
}

/// Multicolored-clique instance: vertex classes are independent sets and
/// a clique must pick one vertex per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MCInstance {
    classes: Vec<Vec<String>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl MCInstance {
    pub fn new(
        classes: Vec<Vec<String>>,
        edge_names: Vec<(String, String)>,
    ) -> Result<Self, ReductionError> {
        let mut seen = std::collections::BTreeSet::new();
        for class in &classes {
            for name in class {
                if !seen.insert(name.clone()) {
                    return Err(ReductionError::InvalidSource(format!(
                        "duplicate vertex `{name}`"
                    )));
                }
            }
        }
        let lookup = |name: &str| -> Option<Vertex> {
            classes.iter().enumerate().find_map(|(color, class)| {
                class
                    .iter()
                    .position(|n| n == name)
                    .map(|index| Vertex { color, index })
            })
        };
        let mut edges = Vec::new();
        for (a, b) in &edge_names {
            let va = lookup(a).ok_or_else(|| {
                ReductionError::InvalidSource(format!("edge references unknown vertex `{a}`"))
            })?;
            let vb = lookup(b).ok_or_else(|| {
                ReductionError::InvalidSource(format!("edge references unknown vertex `{b}`"))
            })?;
            if va.color == vb.color {
                return Err(ReductionError::InvalidSource(format!(
                    "edge {a}-{b} lies inside one color class"
                )));
            }
            let e = if va.color < vb.color { (va, vb) } else { (vb, va) };
            if edges.contains(&e) {
                return Err(ReductionError::InvalidSource(format!(
                    "duplicate edge {a}-{b}"
                )));
            }
            edges.push(e);
        }
        Ok(MCInstance { classes, edges })
    }

    pub fn num_colors(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.classes[v.color][v.index]
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        let e = if a.color < b.color { (a, b) } else { (b, a) };
        self.edges.contains(&e)
    }

    /// Edges between classes `i < j`, in insertion order.
    pub fn edges_between(&self, i: usize, j: usize) -> Vec<(Vertex, Vertex)> {
        assert!(i < j);
        self.edges
            .iter()
            .copied()
            .filter(|(a, b)| a.color == i && b.color == j)
            .collect()
    }

    /// `(s, t)` when every class has `s` vertices, every class pair has
    /// `t` edges, and the number of colors is odd.
    pub fn uniformity(&self) -> Option<(usize, usize)> {
        let k = self.classes.len();
        if k % 2 == 0 || k == 0 {
            return None;
        }
        let s = self.classes[0].len();
        if self.classes.iter().any(|c| c.len() != s) {
            return None;
        }
        let mut t = None;
        for i in 0..k {
            for j in i + 1..k {
                let cnt = self.edges_between(i, j).len();
                match t {
                    None => t = Some(cnt),
                    Some(x) if x != cnt => return None,
                    _ => {}
                }
            }
        }
        t.map(|t| (s, t))
    }

    /// Does picking one vertex per class per `clique` give a multicolored
    /// clique?
    pub fn is_clique(&self, clique: &[Vertex]) -> bool {
        let k = self.num_colors();
        if clique.len() != k {
            return false;
        }
        let mut colors: Vec<usize> = clique.iter().map(|v| v.color).collect();
        colors.sort_unstable();
        if colors != (0..k).collect::<Vec<_>>() {
            return false;
        }
        if clique
            .iter()
            .any(|v| v.index >= self.classes[v.color].len())
        {
            return false;
        }
        for i in 0..k {
            for j in i + 1..k {
                if !self.has_edge(clique[i], clique[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Pads an instance to uniform shape (equal class sizes, equal per-pair
/// edge counts, odd color count) without changing the clique answer:
/// degree-one vertex pairs fill deficient class pairs, isolated vertices
/// fill small classes, and an even color count gets one extra class with
/// a single vertex adjacent to everything that existed before.
pub fn pad_mc(g: &MCInstance) -> Result<MCInstance, ReductionError> {
    let k = g.num_colors();
    if k < 3 {
        return Err(ReductionError::InvalidSource(
            "padding needs at least three color classes".into(),
        ));
    }
    if g.uniformity().is_some() {
        return Ok(g.clone());
    }
    let mut classes = g.classes().to_vec();
    let mut edges: Vec<(String, String)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (g.vertex_name(a).to_string(), g.vertex_name(b).to_string()))
        .collect();
    let mut taken: std::collections::BTreeSet<String> =
        classes.iter().flatten().cloned().collect();
    let mut fresh = 0usize;
    let mut next_name = move |fresh: &mut usize| loop {
        *fresh += 1;
        let name = format!("_pad{fresh}");
        if taken.insert(name.clone()) {
            return name;
        }
    };

    // a k+1-st class whose single vertex sees every original vertex keeps
    // the answer: cliques through it restrict to original ones
    if classes.len() % 2 == 0 {
        let hub = next_name(&mut fresh);
        for class in &classes {
            for v in class {
                edges.push((hub.clone(), v.clone()));
            }
        }
        classes.push(vec![hub]);
    }
    let k = classes.len();

    // equalize per-pair edge counts with fresh degree-one pairs; such
    // vertices cannot join any clique of size >= 3
    let mut counts = vec![vec![0usize; k]; k];
    {
        let probe = MCInstance::new(classes.clone(), edges.clone())?;
        for i in 0..k {
            for j in i + 1..k {
                counts[i][j] = probe.edges_between(i, j).len();
            }
        }
    }
    let t_max = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| counts[i][j])
        .max()
        .unwrap_or(0);
    for i in 0..k {
        for j in i + 1..k {
            for _ in counts[i][j]..t_max {
                let u = next_name(&mut fresh);
                let v = next_name(&mut fresh);
                classes[i].push(u.clone());
                classes[j].push(v.clone());
                edges.push((u, v));
            }
        }
    }

    // equalize class sizes with isolated vertices
    let s_max = classes.iter().map(|c| c.len()).max().unwrap_or(0);
    for class in classes.iter_mut() {
        while class.len() < s_max {
            class.push(next_name(&mut fresh));
        }
    }

    let padded = MCInstance::new(classes, edges)?;
    debug_assert!(padded.uniformity().is_some());
    Ok(padded)
}

/// The three-color triangle: one vertex per class, all pairs adjacent.
pub fn triangle() -> MCInstance {
    MCInstance::new(
        vec![
            vec!["a".to_string()],
            vec!["b".to_string()],
            vec!["c".to_string()],
        ],
        vec![
            ("a".to_string(), "b".to_string()),
            ("b".to_string(), "c".to_string()),
            ("a".to_string(), "c".to_string()),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_uniform() {
        let g = triangle();
        assert_eq!(g.uniformity(), Some((1, 1)));
        assert!(g.is_clique(&[
            Vertex { color: 0, index: 0 },
            Vertex { color: 1, index: 0 },
            Vertex { color: 2, index: 0 },
        ]));
    }

    #[test]
    fn rejects_intra_class_edge() {
        let r = MCInstance::new(
            vec![vec!["a".into(), "b".into()], vec!["c".into()]],
            vec![("a".into(), "b".into())],
        );
        assert!(r.is_err());
    }

    #[test]
    fn rejects_duplicate_vertex() {
        let r = MCInstance::new(vec![vec!["a".into()], vec!["a".into()]], vec![]);
        assert!(r.is_err());
    }

    #[test]
    fn pad_keeps_uniform_instance() {
        let g = triangle();
        assert_eq!(pad_mc(&g).unwrap(), g);
    }

    #[test]
    fn pad_path_stays_no() {
        // path a-b, b-c over 3 colors has no triangle
        let g = MCInstance::new(
            vec![vec!["a".into()], vec!["b".into()], vec!["c".into()]],
            vec![("a".into(), "b".into()), ("b".into(), "c".into())],
        )
        .unwrap();
        let p = pad_mc(&g).unwrap();
        let (s, t) = p.uniformity().unwrap();
        assert_eq!(t, 1);
        assert!(s >= 1);
        assert_eq!(p.num_colors(), 3);
    }

    #[test]
    fn pad_rejects_two_colors() {
        let g = MCInstance::new(vec![vec!["a".into()], vec!["b".into()]], vec![]).unwrap();
        assert!(pad_mc(&g).is_err());
    }
}
