//! JSON encoding of embeddings and distributions. Keys come out in a fixed
//! order and every float is printed with 17 significant digits, so equal
//! values always produce identical bytes.

use std::io;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::host::{ClanEmbedding, SpanningTree, UltraNode, Ultrametric};
use crate::mwu::{DistParams, EmbeddingDistribution, Member, OracleBounds};
use crate::scalar::{to_f64, Scalar};

/// Compact formatting except for floats.
struct Fixed17;

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", f64::from(value))
    }
}

/// One-line JSON with a trailing newline and 17-digit floats.
pub fn to_json_string(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17);
    v.serialize(&mut ser).expect("serializing a Value cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// JSON number for a scalar; always a float so it prints in fixed form.
pub fn num<T: Scalar>(x: T) -> Value {
    let f = to_f64(x);
    serde_json::Number::from_f64(f).map_or(Value::Null, Value::Number)
}

fn clan_maps(emb: &ClanEmbedding) -> (Value, Value) {
    let mut clans = Map::new();
    let mut chief = Map::new();
    for x in 0..emb.n() {
        clans.insert(x.to_string(), json!(emb.clan(x)));
        chief.insert(x.to_string(), json!(emb.chief(x)));
    }
    (Value::Object(clans), Value::Object(chief))
}

pub fn ultra_value<T: Scalar>(u: &Ultrametric<T>, emb: &ClanEmbedding) -> Value {
    let nodes: Vec<Value> = u
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| json!({"id": i, "label": num(n.label), "parent": n.parent, "owner": n.owner}))
        .collect();
    let (clans, chief) = clan_maps(emb);
    json!({"kind": "ultrametric", "nodes": nodes, "clans": clans, "chief": chief})
}

pub fn tree_value<T: Scalar>(t: &SpanningTree<T>, emb: &ClanEmbedding) -> Value {
    let copies: Vec<Value> = t.origs().iter().enumerate().map(|(i, &o)| json!({"id": i, "orig": o})).collect();
    let edges: Vec<Value> = t.edges().iter().map(|&(a, b, w)| json!([a, b, num(w)])).collect();
    let (clans, chief) = clan_maps(emb);
    json!({"kind": "tree", "copies": copies, "edges": edges, "clans": clans, "chief": chief})
}

pub fn distribution_value<T: Scalar>(d: &EmbeddingDistribution<T>) -> Value {
    let p = &d.params;
    let members: Vec<Value> = d.members.iter().map(|m| ultra_value(&m.0, &m.1)).collect();
    json!({
        "kind": "distribution",
        "params": {
            "rounds": p.rounds,
            "delta": num(p.delta),
            "rho": num(p.bounds.rho),
            "alpha": num(p.bounds.alpha),
            "beta": num(p.bounds.beta),
            "eps_slack": num(p.eps_slack),
        },
        "members": members,
    })
}

/// An embedding read back from JSON.
#[derive(Debug, Clone)]
pub enum HostEmbedding<T> {
    Ultrametric(Ultrametric<T>, ClanEmbedding),
    Tree(SpanningTree<T>, ClanEmbedding),
}

impl<T> HostEmbedding<T> {
    pub fn embedding(&self) -> &ClanEmbedding {
        match self {
            HostEmbedding::Ultrametric(_, e) | HostEmbedding::Tree(_, e) => e,
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse { line: 0, msg: msg.into() }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing key \"{key}\"")))
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn opt_index(v: &Value, what: &str) -> Result<Option<usize>> {
    if v.is_null() {
        Ok(None)
    } else {
        index(v, what).map(Some)
    }
}

fn scalar<T: Scalar>(v: &Value, what: &str) -> Result<T> {
    v.as_f64().and_then(T::from_f64).ok_or_else(|| bad(format!("{what} must be a number")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

/// Reads clans and chiefs keyed by point id; every id 0..n−1 must appear.
fn read_clans(v: &Value) -> Result<ClanEmbedding> {
    let clans = field(v, "clans")?.as_object().ok_or_else(|| bad("clans must be an object"))?;
    let chief = field(v, "chief")?.as_object().ok_or_else(|| bad("chief must be an object"))?;
    let n = clans.len();
    let mut lists = vec![Vec::new(); n];
    let mut chiefs = vec![usize::MAX; n];
    for (k, list) in clans {
        let x: usize = k.parse().map_err(|_| bad(format!("clan key \"{k}\" is not a point id")))?;
        if x >= n {
            return Err(bad(format!("clan key {x} out of range")));
        }
        lists[x] = array(list, "clan")?.iter().map(|c| index(c, "copy id")).collect::<Result<_>>()?;
    }
    for (k, c) in chief {
        let x: usize = k.parse().map_err(|_| bad(format!("chief key \"{k}\" is not a point id")))?;
        if x >= n {
            return Err(bad(format!("chief key {x} out of range")));
        }
        chiefs[x] = index(c, "chief copy")?;
    }
    if let Some(x) = chiefs.iter().position(|&c| c == usize::MAX) {
        return Err(bad(format!("point {x} has no chief")));
    }
    ClanEmbedding::new(lists, chiefs)
}

fn read_ultra<T: Scalar>(v: &Value) -> Result<(Ultrametric<T>, ClanEmbedding)> {
    let nodes = array(field(v, "nodes")?, "nodes")?;
    let mut out = Vec::with_capacity(nodes.len());
    for (i, node) in nodes.iter().enumerate() {
        if index(field(node, "id")?, "node id")? != i {
            return Err(bad(format!("node {i} listed out of order")));
        }
        out.push(UltraNode {
            label: scalar(field(node, "label")?, "label")?,
            parent: opt_index(field(node, "parent")?, "parent")?,
            owner: opt_index(field(node, "owner")?, "owner")?,
        });
    }
    let u = Ultrametric::new(out)?;
    let emb = read_clans(v)?;
    emb.check_ultrametric(&u)?;
    Ok((u, emb))
}

fn read_tree<T: Scalar>(v: &Value) -> Result<(SpanningTree<T>, ClanEmbedding)> {
    let copies = array(field(v, "copies")?, "copies")?;
    let mut orig = Vec::with_capacity(copies.len());
    for (i, c) in copies.iter().enumerate() {
        if index(field(c, "id")?, "copy id")? != i {
            return Err(bad(format!("copy {i} listed out of order")));
        }
        orig.push(index(field(c, "orig")?, "orig")?);
    }
    let mut edges = Vec::new();
    for e in array(field(v, "edges")?, "edges")? {
        let e = array(e, "edge")?;
        if e.len() != 3 {
            return Err(bad("edge must be [a, b, w]"));
        }
        edges.push((index(&e[0], "edge endpoint")?, index(&e[1], "edge endpoint")?, scalar(&e[2], "edge length")?));
    }
    let t = SpanningTree::new(orig, edges)?;
    let emb = read_clans(v)?;
    emb.check_tree(&t)?;
    Ok((t, emb))
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Error::NotFound(path.display().to_string()),
        _ => Error::Io(e),
    })
}

pub fn parse_embedding<T: Scalar>(text: &str) -> Result<HostEmbedding<T>> {
    embedding_from_value(&parse_value(text)?)
}

fn embedding_from_value<T: Scalar>(v: &Value) -> Result<HostEmbedding<T>> {
    match field(v, "kind")?.as_str() {
        Some("ultrametric") => read_ultra(v).map(|(u, e)| HostEmbedding::Ultrametric(u, e)),
        Some("tree") => read_tree(v).map(|(t, e)| HostEmbedding::Tree(t, e)),
        _ => Err(bad("kind must be \"ultrametric\" or \"tree\"")),
    }
}

pub fn load_embedding<T: Scalar>(path: impl AsRef<Path>) -> Result<HostEmbedding<T>> {
    parse_embedding(&read_file(path.as_ref())?)
}

pub fn parse_distribution<T: Scalar>(text: &str) -> Result<EmbeddingDistribution<T>> {
    let v = parse_value(text)?;
    if field(&v, "kind")?.as_str() != Some("distribution") {
        return Err(bad("kind must be \"distribution\""));
    }
    let p = field(&v, "params")?;
    let params = DistParams {
        rounds: index(field(p, "rounds")?, "rounds")?,
        delta: scalar(field(p, "delta")?, "delta")?,
        bounds: OracleBounds {
            rho: scalar(field(p, "rho")?, "rho")?,
            alpha: scalar(field(p, "alpha")?, "alpha")?,
            beta: scalar(field(p, "beta")?, "beta")?,
        },
        eps_slack: scalar(field(p, "eps_slack")?, "eps_slack")?,
    };
    let mut members: Vec<Member<T>> = Vec::new();
    for m in array(field(&v, "members")?, "members")? {
        let member = read_ultra(m)?;
        match members.last() {
            Some(prev) if **prev == member => members.push(Arc::clone(prev)),
            _ => members.push(Arc::new(member)),
        }
    }
    if members.len() != params.rounds {
        return Err(bad(format!("distribution lists {} members for {} rounds", members.len(), params.rounds)));
    }
    Ok(EmbeddingDistribution { members, params })
}

pub fn load_distribution<T: Scalar>(path: impl AsRef<Path>) -> Result<EmbeddingDistribution<T>> {
    parse_distribution(&read_file(path.as_ref())?)
}
