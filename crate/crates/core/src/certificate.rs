//! Certificate JSON and an independent verifier for it.
//!
//! ```text
//! {"kind": "coloring", "palette": P, "bound": B, "colors": {"<box id>": c, …}}
//! {"kind": "induced_tree", "r": r, "k": k, "map": {"<tree vertex>": <box id>, …}}
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::str::FromStr;

use num_bigint::BigUint;
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::geometry::AxisBox;
use crate::graph::{intersection_graph, make_trk, trk_size};
use crate::pipeline::Certificate;

fn big_number(x: &BigUint) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("decimal digits form a JSON number"))
}

/// Keys are box ids (or tree vertices), in vertex order.
pub fn to_json(cert: &Certificate, boxes: &[AxisBox]) -> Value {
    let mut obj = Map::new();
    match cert {
        Certificate::ProperColoring {
            coloring, bound, ..
        } => {
            obj.insert("kind".into(), "coloring".into());
            obj.insert("palette".into(), coloring.palette_size.into());
            obj.insert("bound".into(), big_number(bound));
            let colors: Map<String, Value> = coloring
                .colors
                .iter()
                .enumerate()
                .map(|(v, &c)| (boxes[v].id.to_string(), c.into()))
                .collect();
            obj.insert("colors".into(), Value::Object(colors));
        }
        Certificate::InducedTree { r, k, map, .. } => {
            obj.insert("kind".into(), "induced_tree".into());
            obj.insert("r".into(), (*r).into());
            obj.insert("k".into(), (*k).into());
            let m: Map<String, Value> = map
                .iter()
                .enumerate()
                .map(|(tv, &v)| (tv.to_string(), boxes[v].id.into()))
                .collect();
            obj.insert("map".into(), Value::Object(m));
        }
    }
    Value::Object(obj)
}

pub fn to_string(cert: &Certificate, boxes: &[AxisBox]) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(cert, boxes)).expect("Value serialises");
    s.push('\n');
    s
}

/// A certificate as read back from JSON, keyed by box id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedCertificate {
    Coloring {
        palette: usize,
        bound: BigUint,
        colors: BTreeMap<usize, usize>,
    },
    InducedTree {
        r: usize,
        k: usize,
        map: BTreeMap<usize, usize>,
    },
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::InvalidSpec(format!("certificate is missing `{key}`")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidSpec(format!("`{what}` must be a non-negative integer")))
}

fn index_map(v: &Value, what: &str) -> Result<BTreeMap<usize, usize>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidSpec(format!("`{what}` must be an object")))?;
    obj.iter()
        .map(|(key, val)| {
            let key: usize = key
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad key {key:?} in `{what}`")))?;
            Ok((key, as_usize(val, what)?))
        })
        .collect()
}

pub fn parse_certificate(text: &str) -> Result<ParsedCertificate> {
    let root: Value = serde_json::from_str(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::InvalidSpec("certificate must be a JSON object".into()))?;
    match field(obj, "kind")?.as_str() {
        Some("coloring") => {
            let bound = match field(obj, "bound")? {
                Value::Number(n) => BigUint::from_str(&n.to_string()).ok(),
                _ => None,
            }
            .ok_or_else(|| Error::InvalidSpec("`bound` must be a non-negative integer".into()))?;
            Ok(ParsedCertificate::Coloring {
                palette: as_usize(field(obj, "palette")?, "palette")?,
                bound,
                colors: index_map(field(obj, "colors")?, "colors")?,
            })
        }
        Some("induced_tree") => Ok(ParsedCertificate::InducedTree {
            r: as_usize(field(obj, "r")?, "r")?,
            k: as_usize(field(obj, "k")?, "k")?,
            map: index_map(field(obj, "map")?, "map")?,
        }),
        _ => Err(Error::InvalidSpec("`kind` must be \"coloring\" or \"induced_tree\"".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn pass(detail: impl Into<String>) -> Self {
        Self {
            pass: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Self {
            pass: false,
            detail: detail.into(),
        }
    }
}

/// Check a certificate against boxes using only their intersection graph.
///
/// Vertex sets that do not line up (unknown ids, missing vertices, a tree
/// larger than the instance) are [`Error::Mismatch`]; everything else that is
/// wrong is a failing [`Verdict`] naming the offending edge or pair.
pub fn verify_certificate(boxes: &[AxisBox], cert: &ParsedCertificate) -> Result<Verdict> {
    let pos: HashMap<usize, usize> = boxes.iter().enumerate().map(|(i, b)| (b.id, i)).collect();
    if pos.len() != boxes.len() {
        return Err(Error::Mismatch("box ids are not unique".into()));
    }
    let g = intersection_graph(boxes);
    match cert {
        ParsedCertificate::Coloring {
            palette,
            bound,
            colors,
        } => {
            let ids: BTreeSet<usize> = pos.keys().copied().collect();
            let colored: BTreeSet<usize> = colors.keys().copied().collect();
            if ids != colored {
                return Err(Error::Mismatch(format!(
                    "colouring covers {} ids, the instance has {} boxes with different ids",
                    colored.len(),
                    ids.len()
                )));
            }
            if BigUint::from(*palette) > *bound {
                return Ok(Verdict::fail(format!("palette {palette} exceeds bound {bound}")));
            }
            if let Some((id, c)) = colors.iter().find(|(_, &c)| c >= *palette) {
                return Ok(Verdict::fail(format!(
                    "box {id} has colour {c} outside palette {palette}"
                )));
            }
            for (u, v) in g.edges() {
                let (a, b) = (boxes[u].id, boxes[v].id);
                if colors[&a] == colors[&b] {
                    return Ok(Verdict::fail(format!(
                        "edge {a}-{b} is monochromatic (colour {})",
                        colors[&a]
                    )));
                }
            }
            Ok(Verdict::pass(format!(
                "proper colouring of {} boxes with palette {palette} <= {bound}",
                boxes.len()
            )))
        }
        ParsedCertificate::InducedTree { r, k, map } => {
            if *k == 0 {
                return Err(Error::Mismatch("k must be at least 1".into()));
            }
            // the tree has more than r vertices, so this also keeps the count cheap
            let size = if *r >= boxes.len() {
                BigUint::from(*r) + 1u32
            } else {
                trk_size(*r as u32, &BigUint::from(*k))
            };
            if size > BigUint::from(boxes.len()) {
                return Err(Error::Mismatch(format!(
                    "a tree with {size} vertices cannot fit in {} boxes",
                    boxes.len()
                )));
            }
            let tree = make_trk(*r, *k);
            let keys: Vec<usize> = map.keys().copied().collect();
            if keys != (0..tree.n()).collect::<Vec<_>>() {
                return Err(Error::Mismatch(format!(
                    "map must cover tree vertices 0..{} exactly",
                    tree.n()
                )));
            }
            let mut image = Vec::with_capacity(tree.n());
            for (&tv, id) in map {
                let &p = pos
                    .get(id)
                    .ok_or_else(|| Error::Mismatch(format!("tree vertex {tv} maps to unknown box {id}")))?;
                image.push(p);
            }
            let mut seen = HashMap::new();
            for (tv, &p) in image.iter().enumerate() {
                if let Some(other) = seen.insert(p, tv) {
                    return Ok(Verdict::fail(format!(
                        "tree vertices {other} and {tv} both map to box {}",
                        boxes[p].id
                    )));
                }
            }
            for u in 0..tree.n() {
                for v in u + 1..tree.n() {
                    let (a, b) = (boxes[image[u]].id, boxes[image[v]].id);
                    match (tree.adjacent(u, v), g.has_edge(image[u], image[v])) {
                        (true, false) => {
                            return Ok(Verdict::fail(format!(
                                "tree edge {u}-{v} maps to disjoint boxes {a},{b}"
                            )))
                        }
                        (false, true) => {
                            return Ok(Verdict::fail(format!(
                                "non-adjacent tree vertices {u},{v} map to intersecting boxes {a},{b}"
                            )))
                        }
                        _ => {}
                    }
                }
            }
            Ok(Verdict::pass(format!(
                "induced copy of the {k}-ary tree of depth {r} ({} vertices)",
                tree.n()
            )))
        }
    }
}
