//! JSON instance files: `{"n": 3, "k": [2, 2, 2], "generators": [[1, 2, 3]]}`.
//! Indices are 1-based on disk and 0-based everywhere else.

use pathspace_core::set::MAX_PROCESSES;
use pathspace_core::{Error, Hypergraph, ProblemInstance, ProcessSet};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceFile {
    pub n: usize,
    pub k: Vec<u32>,
    pub generators: Vec<Vec<usize>>,
}

impl InstanceFile {
    pub fn from_instance(p: &ProblemInstance) -> Self {
        InstanceFile {
            n: p.n(),
            k: p.k().to_vec(),
            generators: p.hypergraph().generators().iter().map(|&g| one_based(g)).collect(),
        }
    }
}

pub fn one_based(s: ProcessSet) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

/// Result of parsing: the instance plus generators dropped as non-minimal.
pub struct Parsed {
    pub instance: ProblemInstance,
    pub dropped: Vec<ProcessSet>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn integer(v: &Value, at: &str, min: u64, max: u64) -> Result<u64, Error> {
    let x = v
        .as_u64()
        .ok_or_else(|| bad(format!("`{at}` must be a nonnegative integer, got {v}")))?;
    if x < min || x > max {
        return Err(bad(format!("`{at}` = {x} is outside {min}..={max}")));
    }
    Ok(x)
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, Error> {
    v.as_array()
        .ok_or_else(|| bad(format!("`{at}` must be an array, got {v}")))
}

pub fn parse_instance(text: &str) -> Result<Parsed, Error> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| bad(format!("instance is not valid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| bad("instance must be a JSON object with fields `n`, `k`, `generators`"))?;
    if let Some(extra) = obj.keys().find(|key| !matches!(key.as_str(), "n" | "k" | "generators")) {
        return Err(bad(format!("unknown field `{extra}`")));
    }
    let field = |name: &str| obj.get(name).ok_or_else(|| bad(format!("missing field `{name}`")));

    let n = integer(field("n")?, "n", 1, MAX_PROCESSES as u64)? as usize;

    let k_values = array(field("k")?, "k")?;
    if k_values.len() != n {
        return Err(bad(format!("`k` has {} entries but n = {n}", k_values.len())));
    }
    let k = k_values
        .iter()
        .enumerate()
        .map(|(i, v)| integer(v, &format!("k[{i}]"), 1, u32::MAX as u64).map(|x| x as u32))
        .collect::<Result<Vec<_>, _>>()?;

    let gen_values = array(field("generators")?, "generators")?;
    if gen_values.is_empty() {
        return Err(bad("`generators` must contain at least one set"));
    }
    let mut generators = Vec::with_capacity(gen_values.len());
    for (g, gv) in gen_values.iter().enumerate() {
        let at = format!("generators[{g}]");
        let mut set = ProcessSet::default();
        for (j, v) in array(gv, &at)?.iter().enumerate() {
            let i = integer(v, &format!("{at}[{j}]"), 1, n as u64)? as usize - 1;
            if set.contains(i) {
                return Err(bad(format!("`{at}` lists process {} twice", i + 1)));
            }
            set = set.union(ProcessSet::from_bits(1 << i));
        }
        if set.len() < 2 {
            return Err(bad(format!("`{at}` has {} process(es); at least 2 required", set.len())));
        }
        generators.push(set);
    }

    let h = Hypergraph::new(n, generators)?;
    let dropped = h.dropped().to_vec();
    let instance = ProblemInstance::new(h, k)?;
    Ok(Parsed { instance, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(text: &str) -> String {
        match parse_instance(text) {
            Err(Error::InvalidInput(m)) => m,
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => panic!("accepted {text}"),
        }
    }

    #[test]
    fn accepts_minimal_instance() {
        let p = parse_instance(r#"{"n":2,"k":[1,1],"generators":[[1,2]]}"#).unwrap();
        assert_eq!(p.instance.n(), 2);
        assert!(p.dropped.is_empty());
    }

    #[test]
    fn drops_superset_generator() {
        let p = parse_instance(r#"{"n":3,"k":[1,1,1],"generators":[[1,2],[1,2,3]]}"#).unwrap();
        assert_eq!(p.instance.hypergraph().generators().len(), 1);
        assert_eq!(p.dropped, vec![ProcessSet::full(3)]);
    }

    #[test]
    fn errors_name_the_field() {
        assert!(msg(r#"{"n":3,"k":[1,1,1],"generators":[[2]]}"#).contains("generators[0]"));
        assert!(msg(r#"{"n":3,"k":[1,0,1],"generators":[[1,2]]}"#).contains("k[1]"));
        assert!(msg(r#"{"n":3,"k":[1,1,1],"generators":[[1,4]]}"#).contains("generators[0][1]"));
        assert!(msg(r#"{"n":3,"k":[1,1],"generators":[[1,2]]}"#).contains("`k`"));
        assert!(msg(r#"{"k":[1],"generators":[[1,2]]}"#).contains("`n`"));
        assert!(msg(r#"{"n":2,"k":[1,1],"generators":[[1,2]],"x":0}"#).contains("`x`"));
        assert!(msg(r#"{"n":2,"k":[1,1],"generators":[[1,1]]}"#).contains("generators[0]"));
    }

    #[test]
    fn round_trips() {
        let text = r#"{"n":4,"k":[1,2,1,3],"generators":[[1,2],[2,3],[1,3,4]]}"#;
        let p = parse_instance(text).unwrap().instance;
        let file = InstanceFile::from_instance(&p);
        let again = parse_instance(&serde_json::to_string(&file).unwrap()).unwrap().instance;
        assert_eq!(p, again);
    }
}
