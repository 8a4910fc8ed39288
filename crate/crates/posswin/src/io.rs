//! Plain-text formats for election and source instances.
//!
//! All formats are line based and diff friendly; `#` starts a comment and
//! blank lines are skipped. Serialization emits a canonical form: explicit
//! rule vectors, and per vote the transitive reduction of its constraints
//! sorted by label, so parse-serialize round trips are stable.

use crate::election::{
    CandidateId, Candidates, ElectionError, Mode, PWInstance, PartialOrder, PartialProfile,
    ScoringRuleFamily, ScoringVector,
};
use crate::reductions::{MCInstance, ReductionError, X3CInstance};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown candidate `{name}`")]
    UnknownCandidate { line: usize, name: String },
    #[error("line {line}: constraint closes a cycle")]
    CyclicConstraint { line: usize },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// A rule given either as a family name (resolved per candidate count) or
/// as an explicit comma-separated vector.
#[derive(Debug, Clone)]
pub enum RuleSpec {
    Family(ScoringRuleFamily),
    Explicit(ScoringVector),
}

impl RuleSpec {
    pub fn parse(text: &str) -> Result<RuleSpec, String> {
        let t = text.trim();
        if t.contains(',') || t.chars().all(|c| c.is_ascii_digit()) && !t.is_empty() {
            let values: Result<Vec<i64>, _> =
                t.split(',').map(|p| p.trim().parse::<i64>()).collect();
            let values = values.map_err(|e| format!("bad vector entry: {e}"))?;
            return ScoringVector::new(values)
                .map(RuleSpec::Explicit)
                .map_err(|e| e.to_string());
        }
        let fam = match t {
            "plurality" => ScoringRuleFamily::Plurality,
            "veto" => ScoringRuleFamily::Veto,
            "borda" => ScoringRuleFamily::Borda,
            "formula1-2009" => ScoringRuleFamily::Formula1_2009,
            "formula1-2010" => ScoringRuleFamily::Formula1_2010,
            _ => match t.strip_suffix("-approval").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) => ScoringRuleFamily::KApproval(k),
                None => return Err(format!("unknown rule `{t}`")),
            },
        };
        Ok(RuleSpec::Family(fam))
    }

    pub fn resolve(&self, m: usize) -> Result<ScoringVector, ElectionError> {
        match self {
            RuleSpec::Family(f) => f.vector_for(m),
            RuleSpec::Explicit(v) => {
                if v.len() != m {
                    Err(ElectionError::RuleLengthMismatch {
                        expected: m,
                        got: v.len(),
                    })
                } else {
                    Ok(v.clone())
                }
            }
        }
    }
}

pub fn parse_mode(text: &str) -> Result<Mode, String> {
    match text.trim() {
        "co-winner" | "co" => Ok(Mode::CoWinner),
        "unique-winner" | "unique" => Ok(Mode::UniqueWinner),
        other => Err(format!("unknown mode `{other}`")),
    }
}

pub fn mode_str(mode: Mode) -> &'static str {
    match mode {
        Mode::CoWinner => "co-winner",
        Mode::UniqueWinner => "unique-winner",
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// Parses an election document into a possible-winner instance.
pub fn parse_profile(text: &str) -> Result<PWInstance, ParseError> {
    let mut candidates: Option<Candidates> = None;
    let mut rule_spec: Option<RuleSpec> = None;
    let mut distinguished: Option<CandidateId> = None;
    let mut mode = Mode::CoWinner;
    let mut votes: Vec<PartialOrder> = Vec::new();

    for (ln, line) in content_lines(text) {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(ln, "expected `key: value`"))?;
        let rest = rest.trim();
        match key.trim() {
            "candidates" => {
                let mut c = Candidates::new();
                for name in rest.split_whitespace() {
                    if name.contains(['>', ',']) {
                        return Err(syntax(ln, format!("bad candidate label `{name}`")));
                    }
                    c.add(name).map_err(|e| syntax(ln, e.to_string()))?;
                }
                if c.is_empty() {
                    return Err(syntax(ln, "empty candidate list"));
                }
                candidates = Some(c);
            }
            "rule" => {
                rule_spec = Some(RuleSpec::parse(rest).map_err(|e| syntax(ln, e))?);
            }
            "distinguished" => {
                let cands = candidates
                    .as_ref()
                    .ok_or_else(|| syntax(ln, "candidates must come first"))?;
                distinguished =
                    Some(cands.lookup(rest).ok_or_else(|| ParseError::UnknownCandidate {
                        line: ln,
                        name: rest.to_string(),
                    })?);
            }
            "mode" => {
                mode = parse_mode(rest).map_err(|e| syntax(ln, e))?;
            }
            "vote" => {
                let cands = candidates
                    .as_ref()
                    .ok_or_else(|| syntax(ln, "candidates must come first"))?;
                votes.push(parse_vote(rest, cands, ln)?);
            }
            other => return Err(syntax(ln, format!("unknown key `{other}`"))),
        }
    }

    let candidates = candidates.ok_or(ParseError::MissingHeader("candidates"))?;
    let rule_spec = rule_spec.ok_or(ParseError::MissingHeader("rule"))?;
    let distinguished = distinguished.ok_or(ParseError::MissingHeader("distinguished"))?;
    let m = candidates.len();
    let rule = rule_spec.resolve(m)?;
    let mut profile = PartialProfile::new(candidates);
    for v in votes {
        profile.push(v)?;
    }
    Ok(PWInstance::new(profile, distinguished, rule, mode)?)
}

/// One vote line: comma-separated chains like `a > b > c, d > b`.
fn parse_vote(rest: &str, cands: &Candidates, ln: usize) -> Result<PartialOrder, ParseError> {
    let mut vote = PartialOrder::new(cands.len());
    if rest.is_empty() {
        return Ok(vote);
    }
    for chain in rest.split(',') {
        let names: Vec<&str> = chain.split('>').map(str::trim).collect();
        if names.len() < 2 || names.iter().any(|n| n.is_empty()) {
            return Err(syntax(ln, format!("bad constraint `{}`", chain.trim())));
        }
        let ids: Vec<CandidateId> = names
            .iter()
            .map(|n| {
                cands.lookup(n).ok_or_else(|| ParseError::UnknownCandidate {
                    line: ln,
                    name: n.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        for pair in ids.windows(2) {
            vote.add(pair[0], pair[1]).map_err(|e| match e {
                ElectionError::Cycle(..) => ParseError::CyclicConstraint { line: ln },
                other => syntax(ln, other.to_string()),
            })?;
        }
    }
    Ok(vote)
}

/// Canonical text form of an instance.
pub fn serialize_profile(inst: &PWInstance) -> String {
    let cands = &inst.profile.candidates;
    let mut out = String::new();
    out.push_str(&format!("candidates: {}\n", cands.labels().join(" ")));
    let values: Vec<String> = inst.rule.values().iter().map(|v| v.to_string()).collect();
    out.push_str(&format!("rule: {}\n", values.join(",")));
    out.push_str(&format!(
        "distinguished: {}\n",
        cands.label(inst.distinguished)
    ));
    out.push_str(&format!("mode: {}\n", mode_str(inst.mode)));
    for vote in &inst.profile.votes {
        let mut pairs: Vec<(String, String)> = vote
            .reduction()
            .into_iter()
            .map(|(a, b)| (cands.label(a).to_string(), cands.label(b).to_string()))
            .collect();
        pairs.sort();
        let body: Vec<String> = pairs.iter().map(|(a, b)| format!("{a} > {b}")).collect();
        out.push_str(&format!("vote: {}\n", body.join(", ")));
    }
    out
}

/// A realization task: partial votes plus score targets.
pub struct RealizeTask {
    pub instance: PWInstance,
    pub spec: crate::realize::MaxPartialScoreSpec,
}

/// Profile document extended with `dummy:`, `target: <cand> <points>`,
/// and `allow-subtraction:` headers.
pub fn parse_realize_task(text: &str) -> Result<RealizeTask, ParseError> {
    let mut profile_lines = String::new();
    let mut dummy_name: Option<(usize, String)> = None;
    let mut targets_raw: Vec<(usize, String, i64)> = Vec::new();
    let mut allow_subtraction = false;
    for (ln, line) in content_lines(text) {
        let Some((key, rest)) = line.split_once(':') else {
            return Err(syntax(ln, "expected `key: value`"));
        };
        let rest = rest.trim();
        match key.trim() {
            "dummy" => dummy_name = Some((ln, rest.to_string())),
            "target" => {
                let (name, pts) = rest
                    .rsplit_once(char::is_whitespace)
                    .ok_or_else(|| syntax(ln, "expected `target: <candidate> <points>`"))?;
                let pts: i64 = pts
                    .trim()
                    .parse()
                    .map_err(|_| syntax(ln, format!("bad target value `{pts}`")))?;
                targets_raw.push((ln, name.trim().to_string(), pts));
            }
            "allow-subtraction" => {
                allow_subtraction = matches!(rest, "true" | "yes" | "1");
            }
            _ => {
                profile_lines.push_str(line);
                profile_lines.push('\n');
            }
        }
    }
    let instance = parse_profile(&profile_lines)?;
    let cands = &instance.profile.candidates;
    let (dln, dname) = dummy_name.ok_or(ParseError::MissingHeader("dummy"))?;
    let dummy = cands.lookup(&dname).ok_or(ParseError::UnknownCandidate {
        line: dln,
        name: dname,
    })?;
    let mut targets = std::collections::BTreeMap::new();
    for (ln, name, pts) in targets_raw {
        let id = cands
            .lookup(&name)
            .ok_or(ParseError::UnknownCandidate { line: ln, name })?;
        targets.insert(id, pts);
    }
    let spec = crate::realize::MaxPartialScoreSpec {
        targets,
        dummy,
        mode: instance.mode,
        allow_subtraction,
    };
    Ok(RealizeTask { instance, spec })
}

/// `E q` then one `S e1 e2 e3` line per ordered triple.
pub fn parse_x3c(text: &str) -> Result<X3CInstance, ParseError> {
    let mut q: Option<usize> = None;
    let mut triples = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("E") => {
                let v = parts
                    .next()
                    .and_then(|p| p.parse::<usize>().ok())
                    .ok_or_else(|| syntax(ln, "expected `E <universe size>`"))?;
                if parts.next().is_some() {
                    return Err(syntax(ln, "trailing tokens after universe size"));
                }
                q = Some(v);
            }
            Some("S") => {
                let es: Vec<usize> = parts
                    .map(|p| {
                        p.parse::<usize>()
                            .map_err(|_| syntax(ln, format!("bad element `{p}`")))
                    })
                    .collect::<Result<_, _>>()?;
                if es.len() != 3 {
                    return Err(syntax(ln, "subsets must have exactly three elements"));
                }
                triples.push([es[0], es[1], es[2]]);
            }
            _ => return Err(syntax(ln, "expected `E ...` or `S ...`")),
        }
    }
    let q = q.ok_or(ParseError::MissingHeader("E"))?;
    Ok(X3CInstance::new(q, triples)?)
}

pub fn serialize_x3c(x: &X3CInstance) -> String {
    let mut out = format!("E {}\n", x.universe_size());
    for t in x.triples() {
        out.push_str(&format!("S {} {} {}\n", t[0], t[1], t[2]));
    }
    out
}

/// One `class ...` line per color, then `edge a b` lines.
pub fn parse_mc(text: &str) -> Result<MCInstance, ParseError> {
    let mut classes: Vec<Vec<String>> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("class") => {
                let members: Vec<String> = parts.map(str::to_string).collect();
                if members.is_empty() {
                    return Err(syntax(ln, "empty color class"));
                }
                if !edges.is_empty() {
                    return Err(syntax(ln, "classes must precede edges"));
                }
                classes.push(members);
            }
            Some("edge") => {
                let a = parts.next().ok_or_else(|| syntax(ln, "edge needs two vertices"))?;
                let b = parts.next().ok_or_else(|| syntax(ln, "edge needs two vertices"))?;
                if parts.next().is_some() {
                    return Err(syntax(ln, "trailing tokens after edge"));
                }
                edges.push((a.to_string(), b.to_string()));
            }
            _ => return Err(syntax(ln, "expected `class ...` or `edge ...`")),
        }
    }
    if classes.is_empty() {
        return Err(ParseError::MissingHeader("class"));
    }
    Ok(MCInstance::new(classes, edges)?)
}

pub fn serialize_mc(g: &MCInstance) -> String {
    let mut out = String::new();
    for class in g.classes() {
        out.push_str(&format!("class {}\n", class.join(" ")));
    }
    for &(a, b) in g.edges() {
        out.push_str(&format!(
            "edge {} {}\n",
            g.vertex_name(a),
            g.vertex_name(b)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_PROFILE: &str = "\
# plurality example
candidates: a b c d
rule: plurality
distinguished: c
mode: co-winner
vote: a > c, c > d, b > c
vote: c > a, a > b
vote: a > d, d > b
vote: a > b, b > c
vote: a > c, b > d
";

    #[test]
    fn parses_example_profile() {
        let inst = parse_profile(FIG_PROFILE).unwrap();
        assert_eq!(inst.num_candidates(), 4);
        assert_eq!(inst.profile.votes.len(), 5);
        assert_eq!(inst.rule.values(), &[1, 0, 0, 0]);
        assert_eq!(
            inst.profile.candidates.label(inst.distinguished),
            "c"
        );
    }

    #[test]
    fn empty_vote_section() {
        let text = "candidates: a b\nrule: plurality\ndistinguished: a\n";
        let inst = parse_profile(text).unwrap();
        assert_eq!(inst.profile.votes.len(), 0);
    }

    #[test]
    fn cycle_rejected_with_line() {
        let text = "candidates: a b\nrule: plurality\ndistinguished: a\nvote: a > b, b > a\n";
        match parse_profile(text) {
            Err(ParseError::CyclicConstraint { line }) => assert_eq!(line, 4),
            other => panic!("expected cycle error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_candidate_with_line() {
        let text = "candidates: a b\nrule: plurality\ndistinguished: a\nvote: a > z\n";
        match parse_profile(text) {
            Err(ParseError::UnknownCandidate { line, name }) => {
                assert_eq!(line, 4);
                assert_eq!(name, "z");
            }
            other => panic!("expected unknown candidate, got {other:?}"),
        }
    }

    #[test]
    fn profile_roundtrip_is_stable() {
        let inst = parse_profile(FIG_PROFILE).unwrap();
        let canon = serialize_profile(&inst);
        let again = parse_profile(&canon).unwrap();
        assert_eq!(serialize_profile(&again), canon);
        // same semantics: identical votes and rule
        assert_eq!(again.rule, inst.rule);
        for (a, b) in inst.profile.votes.iter().zip(&again.profile.votes) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn x3c_roundtrip() {
        let x = parse_x3c("E 3\nS 1 2 3\n").unwrap();
        assert_eq!(x.universe_size(), 3);
        assert_eq!(x.num_subsets(), 1);
        let canon = serialize_x3c(&x);
        assert_eq!(canon, "E 3\nS 1 2 3\n");
        assert_eq!(parse_x3c(&canon).unwrap(), x);
    }

    #[test]
    fn x3c_rejects_non_triple() {
        assert!(parse_x3c("E 4\nS 1 2 3 4\n").is_err());
    }

    #[test]
    fn mc_rejects_intra_class_edge() {
        let text = "class a b\nclass c\nedge a b\n";
        assert!(parse_mc(text).is_err());
    }

    #[test]
    fn mc_roundtrip() {
        let text = "class a\nclass b\nclass c\nedge a b\nedge b c\nedge a c\n";
        let g = parse_mc(text).unwrap();
        let canon = serialize_mc(&g);
        assert_eq!(parse_mc(&canon).unwrap(), g);
        assert_eq!(serialize_mc(&parse_mc(&canon).unwrap()), canon);
    }

    #[test]
    fn rule_specs() {
        assert!(matches!(
            RuleSpec::parse("3-approval"),
            Ok(RuleSpec::Family(ScoringRuleFamily::KApproval(3)))
        ));
        assert!(RuleSpec::parse("2,1,0").is_ok());
        assert!(RuleSpec::parse("no-such-rule").is_err());
        assert!(RuleSpec::parse("1,2,3").is_err()); // increasing
    }
}
