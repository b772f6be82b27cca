//! Non-symmetric operads stored arity by arity up to a finite bound.
//!
//! An [`OperadTable`] holds the components `O(0..=max_arity)`, the partial
//! compositions `∘_i : O(p) ⊗ O(q) → O(p+q−1)` as dense tables on basis
//! pairs, the identity in `O(1)` and optionally a differential of degree −1.
//! The checkers evaluate the associativity and unit laws (in their graded
//! form, with the Koszul sign on the parallel law) on every basis triple.

mod algebra;
mod builtin;
mod endo;

pub use algebra::{
    algebra_structure, check_algebra_morphism, compose_morphisms, lift_to_end_of_map, ProductTable,
};
pub use builtin::{build_ass, build_phi, build_uass};
pub use endo::{end_basis_index, end_operad, end_operad_of_map, EndOfMap};

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graded::{is_odd, koszul_odd, GradedSpace, HomogMap, SparseVec};
use crate::scalar::Field;

/// Cap on the number of violations kept in a report.
pub const MAX_REPORTED: usize = 64;

/// `∘_i` on basis pairs of `O(p) × O(q)`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct CompTable {
    dim_y: usize,
    data: Vec<SparseVec>,
}

impl CompTable {
    fn new(dim_x: usize, dim_y: usize) -> Self {
        CompTable {
            dim_y,
            data: vec![SparseVec::new(); dim_x * dim_y],
        }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &SparseVec {
        &self.data[x * self.dim_y + y]
    }

    fn set(&mut self, x: usize, y: usize, v: SparseVec) {
        let k = x * self.dim_y + y;
        self.data[k] = v;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperadTable {
    field: Field,
    components: Vec<Arc<GradedSpace>>,
    comp: BTreeMap<(usize, usize, usize), CompTable>,
    identity: SparseVec,
    differential: Option<Vec<HomogMap>>,
}

/// Incremental construction of an [`OperadTable`].
pub struct OperadBuilder {
    table: OperadTable,
}

impl OperadBuilder {
    /// `components[n]` is `O(n)`; the arity bound is `components.len() − 1`.
    pub fn new(field: Field, components: Vec<GradedSpace>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::Invalid(
                "an operad table needs arities 0 and 1".into(),
            ));
        }
        if let Some(c) = components.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(
                field.to_string(),
                c.field().to_string(),
            ));
        }
        Ok(OperadBuilder {
            table: OperadTable {
                field,
                components: components.into_iter().map(Arc::new).collect(),
                comp: BTreeMap::new(),
                identity: SparseVec::new(),
                differential: None,
            },
        })
    }

    pub fn max_arity(&self) -> usize {
        self.table.max_arity()
    }

    pub fn component(&self, n: usize) -> &Arc<GradedSpace> {
        &self.table.components[n]
    }

    /// Declares `∘_i` on `O(p) ⊗ O(q)` (initially zero).
    pub fn declare_comp(&mut self, p: usize, i: usize, q: usize) -> Result<()> {
        self.table.check_comp_shape(p, i, q)?;
        let dx = self.table.components[p].dim();
        let dy = self.table.components[q].dim();
        self.table
            .comp
            .entry((p, i, q))
            .or_insert_with(|| CompTable::new(dx, dy));
        Ok(())
    }

    /// Declares every `∘_i` whose result arity stays within the bound.
    pub fn declare_all(&mut self) -> Result<()> {
        let max = self.max_arity();
        for p in 1..=max {
            for q in 0..=max {
                if p + q - 1 > max {
                    continue;
                }
                for i in 1..=p {
                    self.declare_comp(p, i, q)?;
                }
            }
        }
        Ok(())
    }

    /// Sets `x ∘_i y` for basis elements; compositions have degree 0.
    pub fn set_comp(
        &mut self,
        (p, i, q): (usize, usize, usize),
        x: usize,
        y: usize,
        value: SparseVec,
    ) -> Result<()> {
        self.declare_comp(p, i, q)?;
        let cx = &self.table.components[p];
        let cy = &self.table.components[q];
        let r = p + q - 1;
        let cr = &self.table.components[r];
        if x >= cx.dim() || y >= cy.dim() || value.indices().any(|k| k >= cr.dim()) {
            return Err(Error::Shape(format!("∘_{i} entry out of range")));
        }
        let want = cx.deg(x) + cy.deg(y);
        if let Some(k) = value.indices().find(|&k| cr.deg(k) != want) {
            return Err(Error::Degree(format!(
                "{} ∘_{i} {} has degree {want} but contains {}",
                cx.name(x),
                cy.name(y),
                cr.name(k)
            )));
        }
        self.table
            .comp
            .get_mut(&(p, i, q))
            .expect("declared")
            .set(x, y, value);
        Ok(())
    }

    pub fn set_identity(&mut self, identity: SparseVec) -> Result<()> {
        let c1 = &self.table.components[1];
        if identity.indices().any(|k| k >= c1.dim() || c1.deg(k) != 0) {
            return Err(Error::Degree(
                "identity must lie in O(1) in degree 0".into(),
            ));
        }
        self.table.identity = identity;
        Ok(())
    }

    /// One degree −1 endomorphism per arity.
    pub fn set_differential(&mut self, d: Vec<HomogMap>) -> Result<()> {
        if d.len() != self.table.components.len() {
            return Err(Error::Shape("differential needs one map per arity".into()));
        }
        for (n, map) in d.iter().enumerate() {
            let c = &self.table.components[n];
            if map.degree() != -1 || **map.source() != **c || **map.target() != **c {
                return Err(Error::Shape(format!(
                    "differential in arity {n} must be a degree −1 endomorphism"
                )));
            }
        }
        self.table.differential = Some(d);
        Ok(())
    }

    pub fn finish(self) -> OperadTable {
        self.table
    }
}

impl OperadTable {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn max_arity(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &Arc<GradedSpace> {
        &self.components[n]
    }

    pub fn components(&self) -> &[Arc<GradedSpace>] {
        &self.components
    }

    pub fn identity(&self) -> &SparseVec {
        &self.identity
    }

    pub fn differential(&self, n: usize) -> Option<&HomogMap> {
        self.differential.as_ref().map(|d| &d[n])
    }

    pub fn has_differential(&self) -> bool {
        self.differential.is_some()
    }

    fn check_comp_shape(&self, p: usize, i: usize, q: usize) -> Result<()> {
        let max = self.max_arity();
        if p == 0 || i == 0 || i > p {
            return Err(Error::Invalid(format!("∘_{i} undefined on arity {p}")));
        }
        if p > max || q > max || p + q - 1 > max {
            return Err(Error::ArityBound(p.max(q).max(p + q - 1), max));
        }
        Ok(())
    }

    pub fn comp_table(&self, p: usize, i: usize, q: usize) -> Result<&CompTable> {
        self.check_comp_shape(p, i, q)?;
        self.comp
            .get(&(p, i, q))
            .ok_or(Error::MissingComposition { p, i, q })
    }

    /// `x ∘_i y`, extended bilinearly.
    pub fn compose(
        &self,
        (p, i, q): (usize, usize, usize),
        x: &SparseVec,
        y: &SparseVec,
    ) -> Result<SparseVec> {
        let t = self.comp_table(p, i, q)?;
        let mut out = SparseVec::new();
        for (a, ca) in x.iter() {
            for (b, cb) in y.iter() {
                let v = t.get(a, b);
                if !v.is_zero() {
                    out.add_scaled(v, &(ca * cb));
                }
            }
        }
        Ok(out)
    }

    /// Replaces one composition table; used by mutation tests.
    pub fn with_comp_scaled(
        &self,
        (p, i, q): (usize, usize, usize),
        c: &crate::scalar::Scalar,
    ) -> Result<Self> {
        let mut out = self.clone();
        let t = out
            .comp
            .get_mut(&(p, i, q))
            .ok_or(Error::MissingComposition { p, i, q })?;
        for v in t.data.iter_mut() {
            *v = v.scaled(c);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let mut components = serde_json::Map::new();
        for (n, c) in self.components.iter().enumerate() {
            components.insert(n.to_string(), c.to_json());
        }
        let mut comp = Vec::new();
        for (&(p, i, q), t) in &self.comp {
            let cx = &self.components[p];
            let cy = &self.components[q];
            let cr = &self.components[p + q - 1];
            let mut entries = Vec::new();
            for x in 0..cx.dim() {
                for y in 0..cy.dim() {
                    for (k, c) in t.get(x, y).iter() {
                        entries.push(json!([cr.name(k), cx.name(x), cy.name(y), c.to_json()]));
                    }
                }
            }
            comp.push(json!({"p": p, "i": i, "q": q, "entries": entries}));
        }
        let mut out = json!({
            "components": components,
            "comp": comp,
            "identity": self.components[1].vec_to_json(&self.identity),
        });
        if let Some(d) = &self.differential {
            let mut dm = serde_json::Map::new();
            for (n, map) in d.iter().enumerate() {
                dm.insert(n.to_string(), map.to_json());
            }
            out["differential"] = Value::Object(dm);
        }
        out
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let comps = value
            .get("components")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("operad needs 'components' object".into()))?;
        let mut by_arity = BTreeMap::new();
        for (k, v) in comps {
            let n: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad arity key '{k}'")))?;
            by_arity.insert(n, GradedSpace::from_json(v)?);
        }
        let max = *by_arity
            .keys()
            .next_back()
            .ok_or_else(|| Error::Parse("operad has no components".into()))?;
        let field = by_arity.values().next().expect("nonempty").field();
        let components = (0..=max.max(1))
            .map(|n| {
                by_arity
                    .remove(&n)
                    .unwrap_or_else(|| GradedSpace::zero(field))
            })
            .collect();
        let mut b = OperadBuilder::new(field, components)?;
        for item in value
            .get("comp")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("operad needs 'comp' list".into()))?
        {
            let get = |key: &str| {
                item.get(key)
                    .and_then(Value::as_u64)
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::Parse(format!("comp entry needs '{key}'")))
            };
            let (p, i, q) = (get("p")?, get("i")?, get("q")?);
            b.declare_comp(p, i, q)?;
            let cx = b.component(p).clone();
            let cy = b.component(q).clone();
            let cr = b.component(p + q - 1).clone();
            let mut acc: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
            for e in item
                .get("entries")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("comp entry needs 'entries'".into()))?
            {
                let e = e
                    .as_array()
                    .filter(|e| e.len() == 4)
                    .ok_or_else(|| Error::Parse(format!("bad comp entry {e}")))?;
                let name = |v: &Value| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse(format!("bad name {v}")))
                };
                let out = cr.index_of(&name(&e[0])?)?;
                let x = cx.index_of(&name(&e[1])?)?;
                let y = cy.index_of(&name(&e[2])?)?;
                let c = field.parse_scalar(&e[3])?;
                acc.entry((x, y)).or_default().add_term(out, &c);
            }
            for ((x, y), v) in acc {
                b.set_comp((p, i, q), x, y, v)?;
            }
        }
        let c1 = b.component(1).clone();
        let identity = match value.get("identity") {
            Some(Value::String(name)) => SparseVec::basis(c1.index_of(name)?, field),
            Some(v @ Value::Array(_)) => c1.vec_from_json(v)?,
            _ => return Err(Error::Parse("operad needs 'identity'".into())),
        };
        b.set_identity(identity)?;
        if let Some(dv) = value.get("differential").filter(|v| !v.is_null()) {
            let dm = dv
                .as_object()
                .ok_or_else(|| Error::Parse("'differential' must map arity to map".into()))?;
            let mut maps = Vec::new();
            for n in 0..=b.max_arity() {
                let c = b.component(n).clone();
                maps.push(match dm.get(&n.to_string()) {
                    Some(m) => HomogMap::from_json(m, c.clone(), c)?,
                    None => HomogMap::zero(c.clone(), c, -1),
                });
            }
            b.set_differential(maps)?;
        }
        Ok(b.finish())
    }
}

/// A failed instance of one of the laws, with both evaluated sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, PartialOrd, Ord)]
pub struct Violation {
    pub law: String,
    pub arities: Vec<usize>,
    pub positions: Vec<usize>,
    pub elements: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub ok: bool,
    pub max_arity: usize,
    pub checked: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    fn from_parts(max_arity: usize, parts: Vec<(u64, Vec<Violation>)>) -> Self {
        let mut checked = 0;
        let mut violations = Vec::new();
        for (c, v) in parts {
            checked += c;
            violations.extend(v);
        }
        let violation_count = violations.len() as u64;
        violations.truncate(MAX_REPORTED);
        AxiomReport {
            ok: violation_count == 0,
            max_arity,
            checked,
            violation_count,
            violations,
        }
    }

    pub fn first_law(&self) -> Option<&str> {
        self.violations.first().map(|v| v.law.as_str())
    }
}

struct Checker<'a> {
    op: &'a OperadTable,
    out: Vec<Violation>,
    checked: u64,
}

/// Names, arities and positions of a checked instance, built only on failure.
type Context = (Vec<usize>, Vec<usize>, Vec<String>);

impl<'a> Checker<'a> {
    fn record(
        &mut self,
        law: &str,
        arity: usize,
        lhs: &SparseVec,
        rhs: &SparseVec,
        context: impl FnOnce() -> Context,
    ) {
        self.checked += 1;
        if lhs != rhs {
            let c = &self.op.components[arity];
            let (arities, positions, elements) = context();
            self.out.push(Violation {
                law: law.to_string(),
                arities,
                positions,
                elements,
                lhs: c.fmt_vec(lhs),
                rhs: c.fmt_vec(rhs),
            });
        }
    }
}

/// `v ∘ z` for a vector `v` and a basis element `z`.
fn left_apply(t: &CompTable, v: &SparseVec, z: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (k, c) in v.iter() {
        let w = t.get(k, z);
        if !w.is_zero() {
            out.add_scaled(w, c);
        }
    }
    out
}

/// `x ∘ v` for a basis element `x` and a vector `v`.
fn right_apply(t: &CompTable, x: usize, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (k, c) in v.iter() {
        let w = t.get(x, k);
        if !w.is_zero() {
            out.add_scaled(w, c);
        }
    }
    out
}

/// Checks associativity, the graded parallel law, the unit laws and, when a
/// differential is present, the derivation rule, `d(id) = 0` and `d² = 0`,
/// on all basis elements with every arity involved at most `max_arity`.
pub fn check_operad_axioms(op: &OperadTable, max_arity: usize) -> Result<AxiomReport> {
    if max_arity > op.max_arity() {
        return Err(Error::ArityBound(max_arity, op.max_arity()));
    }
    // Fail fast on missing tables.
    for p in 1..=max_arity {
        for q in 0..=max_arity {
            if p + q - 1 <= max_arity {
                for i in 1..=p {
                    op.comp_table(p, i, q)?;
                }
            }
        }
    }
    let mut jobs = Vec::new();
    for a in 1..=max_arity {
        for x in 0..op.components[a].dim() {
            jobs.push((a, x));
        }
    }
    let mut parts: Vec<(u64, Vec<Violation>)> = jobs
        .par_iter()
        .map(|&(a, x)| {
            let mut ck = Checker {
                op,
                out: Vec::new(),
                checked: 0,
            };
            check_from(&mut ck, max_arity, a, x)?;
            Ok((ck.checked, ck.out))
        })
        .collect::<Result<_>>()?;
    parts.push(check_units_and_d(op, max_arity)?);
    Ok(AxiomReport::from_parts(max_arity, parts))
}

/// Laws whose outermost element is the basis element `x ∈ O(a)`.
fn check_from(ck: &mut Checker, max: usize, a: usize, x: usize) -> Result<()> {
    let op = ck.op;
    let field = op.field;
    let cx = &op.components[a];
    let ex = SparseVec::basis(x, field);
    let dx = cx.deg(x);
    for b in 0..=max {
        if a + b - 1 > max {
            break;
        }
        let cy = &op.components[b];
        for c in 0..=max {
            if a + b + c < 2 || a + b + c - 2 > max {
                continue;
            }
            let cz = &op.components[c];
            // Parallel: (x∘_i y)∘_j z = (−1)^{|y||z|} (x∘_j z)∘_{i+c−1} y, j < i.
            if a >= 2 && a + c - 1 <= max {
                for i in 2..=a {
                    for j in 1..i {
                        let t_xy = op.comp_table(a, i, b)?;
                        let t_xz = op.comp_table(a, j, c)?;
                        let t_l = op.comp_table(a + b - 1, j, c)?;
                        let t_r = op.comp_table(a + c - 1, i + c - 1, b)?;
                        for y in 0..cy.dim() {
                            let xy = t_xy.get(x, y);
                            for z in 0..cz.dim() {
                                let xz = t_xz.get(x, z);
                                if xy.is_zero() && xz.is_zero() {
                                    ck.checked += 1;
                                    continue;
                                }
                                let lhs = left_apply(t_l, xy, z);
                                let mut rhs = left_apply(t_r, xz, y);
                                if koszul_odd(cy.deg(y), cz.deg(z)) {
                                    rhs = rhs.negated();
                                }
                                ck.record("parallel", a + b + c - 2, &lhs, &rhs, || {
                                    (
                                        vec![a, b, c],
                                        vec![i, j],
                                        vec![
                                            cx.name(x).into(),
                                            cy.name(y).into(),
                                            cz.name(z).into(),
                                        ],
                                    )
                                });
                            }
                        }
                    }
                }
            }
            // Sequential: (x∘_i y)∘_j z = x∘_i (y∘_{j−i+1} z), i ≤ j < i+b.
            if b >= 1 && b + c - 1 <= max {
                for i in 1..=a {
                    for j in i..i + b {
                        let t_xy = op.comp_table(a, i, b)?;
                        let t_yz = op.comp_table(b, j - i + 1, c)?;
                        let t_l = op.comp_table(a + b - 1, j, c)?;
                        let t_r = op.comp_table(a, i, b + c - 1)?;
                        for y in 0..cy.dim() {
                            let xy = t_xy.get(x, y);
                            for z in 0..cz.dim() {
                                let yz = t_yz.get(y, z);
                                if xy.is_zero() && yz.is_zero() {
                                    ck.checked += 1;
                                    continue;
                                }
                                let lhs = left_apply(t_l, xy, z);
                                let rhs = right_apply(t_r, x, yz);
                                ck.record("sequential", a + b + c - 2, &lhs, &rhs, || {
                                    (
                                        vec![a, b, c],
                                        vec![i, j],
                                        vec![
                                            cx.name(x).into(),
                                            cy.name(y).into(),
                                            cz.name(z).into(),
                                        ],
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    // x ∘_i id = x.
    for i in 1..=a {
        let lhs = op.compose((a, i, 1), &ex, &op.identity)?;
        ck.record("right-unit", a, &lhs, &ex, || {
            (vec![a, 1], vec![i], vec![cx.name(x).into(), "id".into()])
        });
    }
    // Derivation: d(x∘_i y) = d(x)∘_i y + (−1)^{|x|} x∘_i d(y).
    if let Some(d) = &op.differential {
        let dxv = d[a].apply(&ex);
        for b in 0..=max {
            if a + b - 1 > max {
                break;
            }
            let cy = &op.components[b];
            for y in 0..cy.dim() {
                let ey = SparseVec::basis(y, field);
                let dyv = d[b].apply(&ey);
                for i in 1..=a {
                    let xy = op.compose((a, i, b), &ex, &ey)?;
                    let lhs = d[a + b - 1].apply(&xy);
                    let mut rhs = op.compose((a, i, b), &dxv, &ey)?;
                    rhs.add_scaled(&op.compose((a, i, b), &ex, &dyv)?, &field.sign(is_odd(dx)));
                    ck.record("derivation", a + b - 1, &lhs, &rhs, || {
                        (
                            vec![a, b],
                            vec![i],
                            vec![cx.name(x).into(), cy.name(y).into()],
                        )
                    });
                }
            }
        }
    }
    Ok(())
}

fn check_units_and_d(op: &OperadTable, max: usize) -> Result<(u64, Vec<Violation>)> {
    let mut ck = Checker {
        op,
        out: Vec::new(),
        checked: 0,
    };
    let field = op.field;
    // id ∘_1 x = x.
    for n in 0..=max {
        let c = op.components[n].clone();
        for x in 0..c.dim() {
            let ex = SparseVec::basis(x, field);
            let lhs = op.compose((1, 1, n), &op.identity, &ex)?;
            ck.record("left-unit", n, &lhs, &ex, || {
                (vec![1, n], vec![1], vec!["id".into(), c.name(x).into()])
            });
        }
    }
    if let Some(d) = &op.differential {
        let did = d[1].apply(&op.identity);
        ck.record("d(id)=0", 1, &did, &SparseVec::new(), || {
            (vec![1], vec![], vec!["id".into()])
        });
        for n in 0..=max {
            let c = op.components[n].clone();
            for x in 0..c.dim() {
                let ddx = d[n].apply(&d[n].apply(&SparseVec::basis(x, field)));
                ck.record("d²=0", n, &ddx, &SparseVec::new(), || {
                    (vec![n], vec![], vec![c.name(x).into()])
                });
            }
        }
    }
    Ok((ck.checked, ck.out))
}

/// Arity-indexed degree-0 maps `f(n) : O(n) → P(n)`.
#[derive(Clone, Debug)]
pub struct OperadMorphism {
    source: Arc<OperadTable>,
    target: Arc<OperadTable>,
    maps: Vec<HomogMap>,
}

impl OperadMorphism {
    /// `maps[n]` for every arity up to the smaller of the two bounds.
    pub fn new(
        source: Arc<OperadTable>,
        target: Arc<OperadTable>,
        maps: Vec<HomogMap>,
    ) -> Result<Self> {
        let bound = source.max_arity().min(target.max_arity());
        if maps.len() != bound + 1 {
            return Err(Error::Shape(format!(
                "operad morphism needs {} component maps, got {}",
                bound + 1,
                maps.len()
            )));
        }
        for (n, m) in maps.iter().enumerate() {
            if m.degree() != 0
                || **m.source() != *source.components[n]
                || **m.target() != *target.components[n]
            {
                return Err(Error::Shape(format!(
                    "component {n} must be a degree 0 map O({n}) → P({n})"
                )));
            }
        }
        Ok(OperadMorphism {
            source,
            target,
            maps,
        })
    }

    pub fn source(&self) -> &Arc<OperadTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OperadTable> {
        &self.target
    }

    pub fn map(&self, n: usize) -> &HomogMap {
        &self.maps[n]
    }

    pub fn max_arity(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn apply(&self, n: usize, x: &SparseVec) -> SparseVec {
        self.maps[n].apply(x)
    }
}

/// `f(x) ∘_i f(y) = f(x ∘_i y)`, `f(id) = id` and `d f = f d` on basis pairs.
pub fn check_operad_morphism(f: &OperadMorphism, max_arity: usize) -> Result<AxiomReport> {
    if max_arity > f.max_arity() {
        return Err(Error::ArityBound(max_arity, f.max_arity()));
    }
    let src = &f.source;
    let tgt = &f.target;
    let field = src.field;
    let mut ck = Checker {
        op: tgt,
        out: Vec::new(),
        checked: 0,
    };
    for p in 1..=max_arity {
        for q in 0..=max_arity {
            if p + q - 1 > max_arity {
                break;
            }
            for i in 1..=p {
                for x in 0..src.components[p].dim() {
                    let ex = SparseVec::basis(x, field);
                    let fx = f.apply(p, &ex);
                    for y in 0..src.components[q].dim() {
                        let ey = SparseVec::basis(y, field);
                        let lhs = tgt.compose((p, i, q), &fx, &f.apply(q, &ey))?;
                        let rhs = f.apply(p + q - 1, &src.compose((p, i, q), &ex, &ey)?);
                        ck.record("morphism ∘_i", p + q - 1, &lhs, &rhs, || {
                            (
                                vec![p, q],
                                vec![i],
                                vec![
                                    src.components[p].name(x).into(),
                                    src.components[q].name(y).into(),
                                ],
                            )
                        });
                    }
                }
            }
        }
    }
    let fid = f.apply(1, &src.identity);
    ck.record("morphism id", 1, &fid, &tgt.identity, || {
        (vec![1], vec![], vec!["id".into()])
    });
    // A missing differential is the zero differential.
    if src.differential.is_some() || tgt.differential.is_some() {
        for n in 0..=max_arity {
            for x in 0..src.components[n].dim() {
                let ex = SparseVec::basis(x, field);
                let lhs = match &tgt.differential {
                    Some(dt) => dt[n].apply(&f.apply(n, &ex)),
                    None => SparseVec::new(),
                };
                let rhs = match &src.differential {
                    Some(ds) => f.apply(n, &ds[n].apply(&ex)),
                    None => SparseVec::new(),
                };
                ck.record("morphism d", n, &lhs, &rhs, || {
                    (vec![n], vec![], vec![src.components[n].name(x).into()])
                });
            }
        }
    }
    Ok(AxiomReport::from_parts(
        max_arity,
        vec![(ck.checked, ck.out)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_of_ass() {
        let ass = build_ass(Field::Rationals, 3).unwrap();
        let back = OperadTable::from_json(&ass.to_json()).unwrap();
        assert_eq!(back, ass);
    }

    #[test]
    fn missing_composition_is_an_error() {
        let comps = vec![
            GradedSpace::zero(Field::Rationals),
            GradedSpace::line(Field::Rationals, "e", 0),
            GradedSpace::line(Field::Rationals, "m", 0),
        ];
        let mut b = OperadBuilder::new(Field::Rationals, comps).unwrap();
        b.set_identity(SparseVec::basis(0, Field::Rationals))
            .unwrap();
        let op = b.finish();
        assert!(matches!(
            check_operad_axioms(&op, 2),
            Err(Error::MissingComposition { .. })
        ));
    }

    #[test]
    fn arity_bound_is_enforced() {
        let ass = build_ass(Field::Rationals, 3).unwrap();
        assert!(matches!(
            check_operad_axioms(&ass, 4),
            Err(Error::ArityBound(4, 3))
        ));
    }
}
