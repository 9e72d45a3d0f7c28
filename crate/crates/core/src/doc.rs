//! JSON documents for maps, dual pairs, economies and information economies.
//!
//! Every document is an object with a `"kind"` field. Scalars are written as
//! JSON numbers for binary floats and as `"p/q"` strings for rationals, so a
//! document read back in the same scalar type reproduces every endpoint bit
//! for bit. Intervals are `[lo, hi, lo_closed, hi_closed]`; a box is a list of
//! intervals and a set is a list of boxes.

use std::path::Path;

use serde_json::{json, Value as Json};

use crate::economy::{AbstractEconomy, Agent};
use crate::error::{Error, Result};
use crate::linear::{Affine, LinearIneq};
use crate::maps::{AffineBox, AxisBounds, Bound, Piece, PiecewiseMap, Value};
use crate::radner::{InfoAgent, InfoEconomy, Signal};
use crate::scalar::Scalar;
use crate::sets::{BoxSet, FlaggedBox, FlaggedInterval};

/// A single map, with the optional data its checks need.
#[derive(Clone, Debug, PartialEq)]
pub struct MapDoc<T> {
    pub name: String,
    pub map: PiecewiseMap<T>,
    /// Compact target `D` for the dilated checks.
    pub target: Option<BoxSet<T>>,
    /// Region `K` and candidate selection for the selection check.
    pub region: Option<BoxSet<T>>,
    pub candidate: Option<PiecewiseMap<T>>,
    /// Domain coordinates the selection must avoid.
    pub diagonal: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairDoc<T> {
    pub name: String,
    pub t1: PiecewiseMap<T>,
    pub t2: PiecewiseMap<T>,
    pub target: BoxSet<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EconomyDoc<T> {
    pub name: String,
    pub economy: AbstractEconomy<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document<T> {
    Map(MapDoc<T>),
    Pair(PairDoc<T>),
    Economy(EconomyDoc<T>),
    Radner(InfoEconomy<T>),
}

impl<T: Scalar> Document<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Map(_) => "map",
            Document::Pair(_) => "pair",
            Document::Economy(_) => "economy",
            Document::Radner(_) => "radner",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Document::Map(d) => &d.name,
            Document::Pair(d) => &d.name,
            Document::Economy(d) => &d.name,
            Document::Radner(d) => &d.name,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let root: Json = serde_json::from_str(text)?;
        Self::from_json(&root)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::doc(path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    pub fn from_json(root: &Json) -> Result<Self> {
        let c = Cursor::root(root);
        let name = c.opt("name").map(|n| n.string()).transpose()?.unwrap_or_default();
        match c.field("kind")?.string()?.as_str() {
            "map" => Ok(Document::Map(MapDoc {
                name,
                map: read_map(&c.field("map")?)?,
                target: c.opt("d").map(|d| read_set(&d)).transpose()?,
                region: c.opt("k").map(|k| read_set(&k)).transpose()?,
                candidate: c.opt("candidate").map(|m| read_map(&m)).transpose()?,
                diagonal: c
                    .opt("diagonal")
                    .map(|d| d.items()?.iter().map(Cursor::usize).collect::<Result<Vec<_>>>())
                    .transpose()?,
            })),
            "pair" => Ok(Document::Pair(PairDoc {
                name,
                t1: read_map(&c.field("t1")?)?,
                t2: read_map(&c.field("t2")?)?,
                target: read_set(&c.field("d")?)?,
            })),
            "economy" => Ok(Document::Economy(EconomyDoc { name, economy: read_economy(&c)? })),
            "radner" => Ok(Document::Radner(read_radner(&c, name)?)),
            other => Err(c.field("kind")?.err(format!("unknown kind {other:?}"))),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Document::Map(d) => {
                let mut out = json!({"kind": "map", "name": d.name, "map": map_json(&d.map)});
                if let Some(t) = &d.target {
                    out["d"] = set_json(t);
                }
                if let Some(k) = &d.region {
                    out["k"] = set_json(k);
                }
                if let Some(c) = &d.candidate {
                    out["candidate"] = map_json(c);
                }
                if let Some(diag) = &d.diagonal {
                    out["diagonal"] = json!(diag);
                }
                out
            }
            Document::Pair(d) => json!({
                "kind": "pair",
                "name": d.name,
                "t1": map_json(&d.t1),
                "t2": map_json(&d.t2),
                "d": set_json(&d.target),
            }),
            Document::Economy(d) => {
                let mut out = economy_json(&d.economy);
                out["name"] = json!(d.name);
                out
            }
            Document::Radner(e) => radner_json(e),
        }
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("document values serialize") + "\n"
    }
}

/// A position in the document tree; errors carry the JSON path.
#[derive(Clone)]
struct Cursor<'a> {
    value: &'a Json,
    path: String,
}

impl<'a> Cursor<'a> {
    fn root(value: &'a Json) -> Self {
        Cursor { value, path: "$".into() }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::doc(self.path.clone(), message)
    }

    fn opt(&self, key: &str) -> Option<Cursor<'a>> {
        let v = self.value.as_object()?.get(key)?;
        (!v.is_null()).then(|| Cursor { value: v, path: format!("{}.{key}", self.path) })
    }

    fn field(&self, key: &str) -> Result<Cursor<'a>> {
        if !self.value.is_object() {
            return Err(self.err("expected an object"));
        }
        self.opt(key).ok_or_else(|| self.err(format!("missing field {key:?}")))
    }

    fn items(&self) -> Result<Vec<Cursor<'a>>> {
        let arr = self.value.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(arr.iter().enumerate().map(|(i, v)| Cursor { value: v, path: format!("{}[{i}]", self.path) }).collect())
    }

    fn scalar<T: Scalar>(&self) -> Result<T> {
        T::from_json(self.value).ok_or_else(|| self.err(format!("expected a finite number, found {}", self.value)))
    }

    fn scalars<T: Scalar>(&self) -> Result<Vec<T>> {
        self.items()?.iter().map(Cursor::scalar).collect()
    }

    fn boolean(&self) -> Result<bool> {
        self.value.as_bool().ok_or_else(|| self.err("expected true or false"))
    }

    fn usize(&self) -> Result<usize> {
        self.value.as_u64().map(|v| v as usize).ok_or_else(|| self.err("expected a nonnegative integer"))
    }

    fn string(&self) -> Result<String> {
        self.value.as_str().map(str::to_owned).ok_or_else(|| self.err("expected a string"))
    }
}

fn read_interval<T: Scalar>(c: &Cursor) -> Result<FlaggedInterval<T>> {
    let parts = c.items()?;
    if parts.len() != 4 {
        return Err(c.err("an interval is [lo, hi, lo_closed, hi_closed]"));
    }
    let (lo, hi) = (parts[0].scalar::<T>()?, parts[1].scalar::<T>()?);
    let (lc, hc) = (parts[2].boolean()?, parts[3].boolean()?);
    FlaggedInterval::new(lo.clone(), hi.clone(), lc, hc)
        .ok_or_else(|| c.err(format!("empty interval with endpoints {lo} and {hi}")))
}

fn read_box<T: Scalar>(c: &Cursor) -> Result<FlaggedBox<T>> {
    let sides = c.items()?.iter().map(read_interval).collect::<Result<Vec<_>>>()?;
    if sides.is_empty() {
        return Err(c.err("a box needs at least one side"));
    }
    Ok(FlaggedBox::new(sides))
}

/// `{"dim": n, "boxes": [...]}` or a bare nonempty list of boxes.
fn read_set<T: Scalar>(c: &Cursor) -> Result<BoxSet<T>> {
    let (dim, boxes) = match c.opt("boxes") {
        Some(b) => (Some(c.field("dim")?.usize()?), b),
        None => (None, c.clone()),
    };
    let boxes = boxes.items()?.iter().map(read_box).collect::<Result<Vec<_>>>()?;
    let dim = match (dim, boxes.first()) {
        (Some(d), _) => d,
        (None, Some(b)) => b.dim(),
        (None, None) => return Err(c.err("an empty set needs the {\"dim\", \"boxes\"} form")),
    };
    BoxSet::from_boxes(dim, boxes).map_err(|e| c.err(e.to_string()))
}

fn read_affine<T: Scalar>(c: &Cursor, n_vars: usize) -> Result<Affine<T>> {
    let coeffs = c.scalars::<T>()?;
    if coeffs.len() != n_vars + 1 {
        return Err(c.err(format!("expected {} coefficients, found {}", n_vars + 1, coeffs.len())));
    }
    Ok(Affine::new(coeffs))
}

fn read_bound<T: Scalar>(c: &Cursor, n_vars: usize) -> Result<Bound<T>> {
    Ok(Bound::new(read_affine(&c.field("expr")?, n_vars)?, c.field("closed")?.boolean()?))
}

/// `[lo_coeffs, hi_coeffs, lo_closed, hi_closed]`, or `{"lower": [...], "upper": [...]}`
/// when an endpoint is a max or min of several affine terms.
fn read_axis<T: Scalar>(c: &Cursor, n_vars: usize) -> Result<AxisBounds<T>> {
    if c.value.is_array() {
        let parts = c.items()?;
        if parts.len() != 4 {
            return Err(c.err("an axis is [lo_coeffs, hi_coeffs, lo_closed, hi_closed]"));
        }
        return Ok(AxisBounds::new(
            Bound::new(read_affine(&parts[0], n_vars)?, parts[2].boolean()?),
            Bound::new(read_affine(&parts[1], n_vars)?, parts[3].boolean()?),
        ));
    }
    let lower = c.field("lower")?.items()?.iter().map(|b| read_bound(b, n_vars)).collect::<Result<Vec<_>>>()?;
    let upper = c.field("upper")?.items()?.iter().map(|b| read_bound(b, n_vars)).collect::<Result<Vec<_>>>()?;
    if lower.is_empty() || upper.is_empty() {
        return Err(c.err("an axis needs at least one lower and one upper bound"));
    }
    Ok(AxisBounds { lower, upper })
}

fn read_affine_box<T: Scalar>(c: &Cursor, n_vars: usize, codomain_dim: usize) -> Result<AffineBox<T>> {
    let axes = c.field("axes")?.items()?.iter().map(|a| read_axis(a, n_vars)).collect::<Result<Vec<_>>>()?;
    if axes.len() != codomain_dim {
        return Err(c.err(format!("expected {codomain_dim} axes, found {}", axes.len())));
    }
    let guards = match c.opt("guards") {
        Some(g) => g
            .items()?
            .iter()
            .map(|g| Ok(LinearIneq::new(read_affine(&g.field("expr")?, n_vars)?, g.field("strict")?.boolean()?)))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(AffineBox { axes, guards })
}

fn read_map<T: Scalar>(c: &Cursor) -> Result<PiecewiseMap<T>> {
    let domain = read_set::<T>(&c.field("domain")?)?;
    let codomain_dim = c.field("codomain_dim")?.usize()?;
    let n = domain.dim();
    let pieces = c
        .field("pieces")?
        .items()?
        .iter()
        .map(|p| {
            let region = read_box::<T>(&p.field("region")?)?;
            if region.dim() != n {
                return Err(p.field("region")?.err(format!("region has dimension {}, domain {n}", region.dim())));
            }
            let boxes = p
                .field("value")?
                .items()?
                .iter()
                .map(|b| read_affine_box(b, n, codomain_dim))
                .collect::<Result<Vec<_>>>()?;
            Ok(Piece { region, value: Value { boxes } })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseMap::new(domain, codomain_dim, pieces).map_err(|e| c.err(e.to_string()))
}

fn read_economy<T: Scalar>(c: &Cursor) -> Result<AbstractEconomy<T>> {
    let agents = c
        .field("agents")?
        .items()?
        .iter()
        .map(|a| {
            Ok(Agent {
                name: a.field("name")?.string()?,
                choice: read_box(&a.field("choice")?)?,
                d: read_set(&a.field("d")?)?,
                a: read_map(&a.field("a")?)?,
                b: read_map(&a.field("b")?)?,
                p: read_map(&a.field("p")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AbstractEconomy::new(agents).map_err(|e| c.field("agents").map(|a| a.err(e.to_string())).unwrap_or(e))
}

fn read_labels(c: &Cursor, states: usize) -> Result<Vec<usize>> {
    let labels = c.items()?.iter().map(Cursor::usize).collect::<Result<Vec<_>>>()?;
    if labels.len() != states {
        return Err(c.err(format!("expected {states} labels, found {}", labels.len())));
    }
    Ok(labels)
}

fn read_radner<T: Scalar>(c: &Cursor, name: String) -> Result<InfoEconomy<T>> {
    let states = c.field("states")?.usize()?;
    let goods = c.field("goods")?.usize()?;
    let truncation = c.opt("truncation").map(|t| t.scalar::<T>()).transpose()?;
    let agents = c
        .field("agents")?
        .items()?
        .iter()
        .map(|a| {
            let s = a.field("signal")?;
            let by_price = match s.opt("by_price") {
                Some(list) => list
                    .items()?
                    .iter()
                    .map(|e| Ok((e.field("price")?.scalars::<T>()?, read_labels(&e.field("labels")?, states)?)))
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            Ok(InfoAgent {
                name: a.field("name")?.string()?,
                endowment: a.field("endowment")?.scalars()?,
                signal: Signal { default: read_labels(&s.field("default")?, states)?, by_price },
                preference: read_map(&a.field("preference")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    InfoEconomy::new(name, states, goods, agents, truncation).map_err(|e| c.err(e.to_string()))
}

fn scalars_json<T: Scalar>(v: &[T]) -> Json {
    Json::Array(v.iter().map(Scalar::to_json).collect())
}

pub fn interval_json<T: Scalar>(iv: &FlaggedInterval<T>) -> Json {
    json!([iv.lo().to_json(), iv.hi().to_json(), iv.lo_closed(), iv.hi_closed()])
}

pub fn box_json<T: Scalar>(b: &FlaggedBox<T>) -> Json {
    Json::Array(b.sides().iter().map(interval_json).collect())
}

/// Bare list form when nonempty, `{"dim", "boxes"}` when empty.
pub fn set_json<T: Scalar>(s: &BoxSet<T>) -> Json {
    let boxes = Json::Array(s.boxes().iter().map(box_json).collect());
    if s.is_empty() {
        json!({"dim": s.dim(), "boxes": boxes})
    } else {
        boxes
    }
}

fn bound_json<T: Scalar>(b: &Bound<T>) -> Json {
    json!({"expr": scalars_json(b.expr.coeffs()), "closed": b.closed})
}

fn axis_json<T: Scalar>(a: &AxisBounds<T>) -> Json {
    if a.is_plain() {
        let (l, u) = (&a.lower[0], &a.upper[0]);
        json!([scalars_json(l.expr.coeffs()), scalars_json(u.expr.coeffs()), l.closed, u.closed])
    } else {
        json!({
            "lower": a.lower.iter().map(bound_json).collect::<Vec<_>>(),
            "upper": a.upper.iter().map(bound_json).collect::<Vec<_>>(),
        })
    }
}

fn affine_box_json<T: Scalar>(b: &AffineBox<T>) -> Json {
    let mut out = json!({"axes": b.axes.iter().map(axis_json).collect::<Vec<_>>()});
    if !b.guards.is_empty() {
        out["guards"] = b
            .guards
            .iter()
            .map(|g| json!({"expr": scalars_json(g.expr.coeffs()), "strict": g.strict}))
            .collect();
    }
    out
}

pub fn map_json<T: Scalar>(m: &PiecewiseMap<T>) -> Json {
    json!({
        "domain": set_json(m.domain()),
        "codomain_dim": m.codomain_dim(),
        "pieces": m.pieces().iter().map(|p| json!({
            "region": box_json(&p.region),
            "value": p.value.boxes.iter().map(affine_box_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn economy_json<T: Scalar>(e: &AbstractEconomy<T>) -> Json {
    json!({
        "kind": "economy",
        "agents": e.agents().iter().map(|a| json!({
            "name": a.name,
            "choice": box_json(&a.choice),
            "d": set_json(&a.d),
            "a": map_json(&a.a),
            "b": map_json(&a.b),
            "p": map_json(&a.p),
        })).collect::<Vec<_>>(),
    })
}

fn radner_json<T: Scalar>(e: &InfoEconomy<T>) -> Json {
    json!({
        "kind": "radner",
        "name": e.name,
        "states": e.states(),
        "goods": e.goods(),
        "truncation": e.truncation().to_json(),
        "agents": e.agents().iter().map(|a| {
            let mut signal = json!({"default": a.signal.default});
            if !a.signal.by_price.is_empty() {
                signal["by_price"] = a.signal.by_price.iter().map(|(p, l)| json!({
                    "price": scalars_json(p), "labels": l,
                })).collect();
            }
            json!({
                "name": a.name,
                "endowment": scalars_json(&a.endowment),
                "signal": signal,
                "preference": map_json(&a.preference),
            })
        }).collect::<Vec<_>>(),
    })
}
