//! The A∞ operad: free on `μ_n` (`n ≥ 2`, degree `n − 2`) with
//! `d(μ_n) = Σ (−1)^{qp+(q−1)i} μ_p ∘_i μ_q` over `p + q − 1 = n`, `p, q ≥ 2`.
//! Also A∞-algebra structures on finite complexes and the Stasheff check.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::free::{
    extend_derivation, graft, verify_d_squared, D2Report, Derivation, GenSet, PlanarTree, TreePoly,
};
use crate::graded::{is_odd, ChainComplex, GradedSpace, HomogMap, SparseVec, TENSOR_SEP};
use crate::operad::{build_ass, OperadBuilder, OperadMorphism, OperadTable, MAX_REPORTED};
use crate::scalar::Field;

/// Exponent of the sign in front of `μ_p ∘_i μ_q` in `d(μ_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SignRule {
    /// `qp + (q − 1)i`
    Standard,
    /// `qp + qi`, a deliberately wrong variant used as a control.
    Mutated,
}

impl SignRule {
    pub fn exponent(self, p: usize, i: usize, q: usize) -> usize {
        match self {
            SignRule::Standard => q * p + (q - 1) * i,
            SignRule::Mutated => q * p + q * i,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            SignRule::Standard => "qp+(q-1)i",
            SignRule::Mutated => "qp+qi",
        }
    }
}

pub fn mu_name(n: usize) -> String {
    format!("mu{n}")
}

#[derive(Clone, Debug)]
pub struct AInfOperad {
    field: Field,
    max_arity: usize,
    rule: SignRule,
    gens: GenSet,
    derivation: Derivation,
}

pub fn build_ainf(max_arity: usize) -> Result<AInfOperad> {
    build_ainf_with(Field::Rationals, max_arity, SignRule::Standard)
}

pub fn build_ainf_with(field: Field, max_arity: usize, rule: SignRule) -> Result<AInfOperad> {
    if max_arity < 2 {
        return Err(Error::Invalid("the A∞ operad needs max arity ≥ 2".into()));
    }
    let gens = GenSet::new((2..=max_arity).map(|n| (mu_name(n), n, n as i64 - 2)))?;
    let mut d = BTreeMap::new();
    for n in 2..=max_arity {
        let mut dn = TreePoly::zero(field, n, n as i64 - 3);
        for p in 2..n {
            let q = n + 1 - p;
            let xp = TreePoly::from_tree(field, gens.corolla(&mu_name(p))?);
            let xq = TreePoly::from_tree(field, gens.corolla(&mu_name(q))?);
            for i in 1..=p {
                let odd = rule.exponent(p, i, q) % 2 == 1;
                dn.add_scaled(&graft(&xp, i, &xq)?, &field.sign(odd))?;
            }
        }
        d.insert(mu_name(n), dn);
    }
    let derivation = extend_derivation(&gens, field, &d)?;
    Ok(AInfOperad {
        field,
        max_arity,
        rule,
        gens,
        derivation,
    })
}

impl AInfOperad {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn rule(&self) -> SignRule {
        self.rule
    }

    pub fn gens(&self) -> &GenSet {
        &self.gens
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn mu(&self, n: usize) -> Result<TreePoly> {
        Ok(TreePoly::from_tree(
            self.field,
            self.gens.corolla(&mu_name(n))?,
        ))
    }

    pub fn d_mu(&self, n: usize) -> Result<TreePoly> {
        Ok(self.derivation.apply(&self.mu(n)?))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorCheck {
    pub n: usize,
    pub degree: i64,
    pub d_terms: usize,
    pub expected_d_terms: usize,
    pub term_shapes_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AInfCertificate {
    pub ok: bool,
    pub max_arity: usize,
    pub sign_rule: &'static str,
    pub degrees_ok: bool,
    pub generators: Vec<GeneratorCheck>,
    pub d_squared: D2Report,
}

pub fn certify_ainf_d_squared(max_arity: usize) -> Result<AInfCertificate> {
    certify_operad(&build_ainf(max_arity)?)
}

/// Degree and term-count bookkeeping plus `d(d(μ_n)) = 0` for every `n`.
pub fn certify_operad(op: &AInfOperad) -> Result<AInfCertificate> {
    let mut generators = Vec::new();
    let mut degrees_ok = true;
    for g in op.gens.iter() {
        let n = g.arity;
        let d = op.d_mu(n)?;
        let shapes = d
            .terms()
            .all(|(t, _)| t.arity() == n && t.degree() == n as i64 - 3 && t.node_count() == 2);
        let expected = n * (n - 1) / 2 - 1;
        degrees_ok &= g.degree == n as i64 - 2 && shapes && d.len() == expected;
        generators.push(GeneratorCheck {
            n,
            degree: g.degree,
            d_terms: d.len(),
            expected_d_terms: expected,
            term_shapes_ok: shapes,
        });
    }
    let d_squared = verify_d_squared(&op.derivation, op.max_arity);
    Ok(AInfCertificate {
        ok: degrees_ok && d_squared.ok,
        max_arity: op.max_arity,
        sign_rule: op.rule.describe(),
        degrees_ok,
        generators,
        d_squared,
    })
}

/// Every planar tree with `n` leaves whose nodes have arity in `2..=max`.
fn planar_trees(
    gens: &GenSet,
    n: usize,
    memo: &mut HashMap<usize, Vec<PlanarTree>>,
) -> Vec<PlanarTree> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(PlanarTree::Leaf);
    }
    for k in 2..=n {
        let Some(g) = gens.get(&mu_name(k)) else {
            continue;
        };
        let corolla = PlanarTree::corolla(g);
        // Distribute n leaves over k children, each with at least one.
        let mut partial: Vec<(PlanarTree, usize, usize)> = vec![(corolla, 1, 0)];
        for s in 0..k {
            let mut next = Vec::new();
            for (t, leaf, used) in &partial {
                let remaining_slots = k - s - 1;
                for a in 1..=(n - used - remaining_slots) {
                    for sub in planar_trees(gens, a, memo) {
                        let (t2, _) = t.graft(*leaf, &sub).expect("leaf in range");
                        next.push((t2, leaf + a, used + a));
                    }
                }
            }
            partial = next;
        }
        out.extend(partial.into_iter().filter(|x| x.2 == n).map(|x| x.0));
    }
    out.sort();
    memo.insert(n, out.clone());
    out
}

/// The A∞ operad as a finite table: `A∞(n)` has one basis element per
/// planar tree with `n` leaves, named by its S-expression.
pub fn ainf_operad_table(op: &AInfOperad, max_arity: usize) -> Result<OperadTable> {
    if max_arity > op.max_arity {
        return Err(Error::ArityBound(max_arity, op.max_arity));
    }
    let field = op.field;
    let mut memo = HashMap::new();
    let trees: Vec<Vec<PlanarTree>> = (0..=max_arity)
        .map(|n| {
            if n == 0 {
                vec![]
            } else {
                planar_trees(&op.gens, n, &mut memo)
            }
        })
        .collect();
    let index: Vec<HashMap<&PlanarTree, usize>> = trees
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(k, t)| (t, k)).collect())
        .collect();
    let components = trees
        .iter()
        .map(|ts| GradedSpace::from_pairs(field, ts.iter().map(|t| (t.to_sexpr(), t.degree()))))
        .collect::<Result<Vec<_>>>()?;
    let mut b = OperadBuilder::new(field, components)?;
    b.declare_all()?;
    for p in 1..=max_arity {
        for q in 1..=max_arity + 1 - p {
            for i in 1..=p {
                for (x, tx) in trees[p].iter().enumerate() {
                    for (y, ty) in trees[q].iter().enumerate() {
                        let (t, odd) = tx.graft(i, ty)?;
                        let k = index[p + q - 1][&t];
                        b.set_comp(
                            (p, i, q),
                            x,
                            y,
                            SparseVec::from_terms([(k, field.sign(odd))]),
                        )?;
                    }
                }
            }
        }
    }
    b.set_identity(SparseVec::basis(0, field))?;
    let mut ds = Vec::new();
    for n in 0..=max_arity {
        let c = b.component(n).clone();
        let mut map = HomogMap::zero(c.clone(), c, -1);
        for (x, t) in trees[n].iter().enumerate() {
            let dt = op.derivation.apply_tree(t);
            map.set_column(
                x,
                dt.terms().map(|(s, c)| (index[n][s], c.clone())).collect(),
            )?;
        }
        ds.push(map);
    }
    b.set_differential(ds)?;
    Ok(b.finish())
}

/// `A∞ → Ass`: `μ_2 ↦ 1` and `μ_n ↦ 0` for `n ≥ 3`, so a tree maps to the
/// generator of `Ass` iff it is binary.
pub fn build_quotient_to_ass(max_arity: usize) -> Result<OperadMorphism> {
    let op = build_ainf(max_arity.max(2))?;
    let src = Arc::new(ainf_operad_table(&op, max_arity.max(2))?);
    let field = op.field;
    let ass = Arc::new(build_ass(field, src.max_arity())?);
    let maps = (0..=src.max_arity())
        .map(|n| {
            let c = src.component(n);
            let entries: Vec<_> = (0..c.dim())
                .filter(|&x| n >= 1 && c.deg(x) == 0)
                .map(|x| (0, x, field.one()))
                .collect();
            HomogMap::new(c.clone(), ass.component(n).clone(), 0, entries)
        })
        .collect::<Result<Vec<_>>>()?;
    OperadMorphism::new(src, ass, maps)
}

/// A homogeneous multilinear map `M^{⊗n} → M`, stored sparsely by input
/// tuple so that large tensor powers are never materialised.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiMap {
    arity: usize,
    degree: i64,
    cols: BTreeMap<Vec<usize>, SparseVec>,
}

impl MultiMap {
    pub fn new(arity: usize, degree: i64) -> Self {
        MultiMap {
            arity,
            degree,
            cols: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn set(&mut self, space: &GradedSpace, inputs: Vec<usize>, value: SparseVec) -> Result<()> {
        if inputs.len() != self.arity || inputs.iter().any(|&a| a >= space.dim()) {
            return Err(Error::Shape(format!("bad input tuple {inputs:?}")));
        }
        let in_deg: i64 = inputs.iter().map(|&a| space.deg(a)).sum();
        for (o, c) in value.iter() {
            if o >= space.dim() {
                return Err(Error::Shape(format!("output index {o} out of range")));
            }
            if !c.is_zero() && space.deg(o) != in_deg + self.degree {
                return Err(Error::Degree(format!(
                    "m{}: {} ↦ {} is not of degree {}",
                    self.arity,
                    tuple_name(space, &inputs),
                    space.name(o),
                    self.degree
                )));
            }
        }
        if value.is_zero() {
            self.cols.remove(&inputs);
        } else {
            self.cols.insert(inputs, value);
        }
        Ok(())
    }

    pub fn get(&self, inputs: &[usize]) -> Option<&SparseVec> {
        self.cols.get(inputs)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&Vec<usize>, &SparseVec)> {
        self.cols.iter()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    /// `{"deg": d, "entries": [[out, "a⊗b⊗…", coeff], …]}`.
    pub fn to_json(&self, space: &GradedSpace) -> Value {
        let entries: Vec<Value> = self
            .cols
            .iter()
            .flat_map(|(t, v)| {
                let name = tuple_name(space, t);
                v.iter()
                    .map(move |(o, c)| json!([space.name(o), name.clone(), c.to_json()]))
                    .collect::<Vec<_>>()
            })
            .collect();
        json!({"deg": self.degree, "entries": entries})
    }

    pub fn from_json(space: &GradedSpace, arity: usize, value: &Value) -> Result<Self> {
        let degree = value
            .get("deg")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("map needs an integer \"deg\"".into()))?;
        let entries = value
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("map needs \"entries\"".into()))?;
        let mut cols: BTreeMap<Vec<usize>, SparseVec> = BTreeMap::new();
        for e in entries {
            let e = e
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::Parse("entry must be [out, in, coeff]".into()))?;
            let out = space.index_of(
                e[0].as_str()
                    .ok_or_else(|| Error::Parse("out must be a name".into()))?,
            )?;
            let ins = e[1]
                .as_str()
                .ok_or_else(|| Error::Parse("in must be a name".into()))?;
            let tuple = if arity == 0 {
                vec![]
            } else {
                ins.split(TENSOR_SEP)
                    .map(|s| space.index_of(s))
                    .collect::<Result<Vec<_>>>()?
            };
            let c = space.field().parse_scalar(&e[2])?;
            cols.entry(tuple).or_default().add_term(out, &c);
        }
        let mut m = MultiMap::new(arity, degree);
        for (t, v) in cols {
            m.set(space, t, v)?;
        }
        Ok(m)
    }
}

fn tuple_name(space: &GradedSpace, t: &[usize]) -> String {
    if t.is_empty() {
        return "1".into();
    }
    t.iter()
        .map(|&a| space.name(a))
        .collect::<Vec<_>>()
        .join(TENSOR_SEP)
}

/// Operations `m_n : M^{⊗n} → M` of degree `n − 2` for `2 ≤ n ≤ r`; the
/// differential of `M` plays the role of `m_1`. Absent `m_n` are zero.
#[derive(Clone, Debug)]
pub struct AInfStructure {
    complex: ChainComplex,
    m: BTreeMap<usize, MultiMap>,
}

impl AInfStructure {
    pub fn new(complex: ChainComplex, m: BTreeMap<usize, MultiMap>) -> Result<Self> {
        for (&n, map) in &m {
            if n < 2 || map.arity != n {
                return Err(Error::Shape(format!(
                    "operation m{n} must have arity {n} ≥ 2"
                )));
            }
            if map.degree != n as i64 - 2 {
                return Err(Error::Degree(format!(
                    "m{n} has degree {}, expected {}",
                    map.degree,
                    n as i64 - 2
                )));
            }
        }
        Ok(AInfStructure { complex, m })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn op(&self, n: usize) -> Option<&MultiMap> {
        self.m.get(&n)
    }

    pub fn to_json(&self) -> Value {
        let space = self.complex.space();
        let mut m = Map::new();
        for (n, map) in &self.m {
            m.insert(n.to_string(), map.to_json(space));
        }
        json!({"complex": self.complex.to_json(), "m": Value::Object(m)})
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let complex = ChainComplex::from_json(
            value
                .get("complex")
                .ok_or_else(|| Error::Parse("structure needs \"complex\"".into()))?,
        )?;
        let mut m = BTreeMap::new();
        if let Some(obj) = value.get("m") {
            let obj = obj
                .as_object()
                .ok_or_else(|| Error::Parse("\"m\" must map arities to maps".into()))?;
            for (k, v) in obj {
                let n: usize = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad arity '{k}'")))?;
                m.insert(n, MultiMap::from_json(complex.space(), n, v)?);
            }
        }
        AInfStructure::new(complex, m)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct StasheffViolation {
    pub arity: usize,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StasheffReport {
    pub ok: bool,
    pub max_arity: usize,
    pub tuples_checked: u64,
    pub violation_count: u64,
    pub violations: Vec<StasheffViolation>,
}

impl StasheffReport {
    pub fn first_violation_arity(&self) -> Option<usize> {
        self.violations.iter().map(|v| v.arity).min()
    }
}

type Sparse = HashMap<Vec<usize>, SparseVec>;

fn accumulate(out: &mut Sparse, key: Vec<usize>, v: &SparseVec, c: &crate::scalar::Scalar) {
    let e = out.entry(key).or_default();
    e.add_scaled(v, c);
}

/// `∂(m_n) = d∘m_n − Σ_i (−1)^{|m_n| + Σ_{j<i}|a_j|} m_n(…, d a_i, …)`.
fn boundary(s: &AInfStructure, n: usize, pre: &[Vec<(usize, crate::scalar::Scalar)>]) -> Sparse {
    let space = s.complex.space();
    let field = space.field();
    let mut out = Sparse::new();
    let Some(f) = s.m.get(&n) else { return out };
    for (t, v) in f.columns() {
        let dv = s.complex.d().apply(v);
        accumulate(&mut out, t.clone(), &dv, &field.one());
        let mut prefix = f.degree;
        for i in 0..n {
            for (src, c) in &pre[t[i]] {
                let mut a = t.clone();
                a[i] = *src;
                accumulate(&mut out, a, v, &(-c).signed(is_odd(prefix)));
            }
            prefix += space.deg(t[i]);
        }
    }
    out
}

/// `Σ (−1)^{qp+(q−1)i} m_p ∘_i m_q` evaluated on tuples, with the insertion
/// sign `(−1)^{|m_q| Σ_{j<i}|a_j|}`.
fn composites(s: &AInfStructure, n: usize, rule: SignRule) -> Sparse {
    let space = s.complex.space();
    let mut out = Sparse::new();
    for p in 2..n {
        let q = n + 1 - p;
        let (Some(mp), Some(mq)) = (s.m.get(&p), s.m.get(&q)) else {
            continue;
        };
        // Columns of m_p indexed by (position, input).
        let mut by_slot: HashMap<(usize, usize), Vec<(&Vec<usize>, &SparseVec)>> = HashMap::new();
        for (w, v) in mp.columns() {
            for (k, &a) in w.iter().enumerate() {
                by_slot.entry((k, a)).or_default().push((w, v));
            }
        }
        for i in 1..=p {
            let base = rule.exponent(p, i, q);
            for (u, vq) in mq.columns() {
                for (c, vc) in vq.iter() {
                    let Some(ws) = by_slot.get(&(i - 1, c)) else {
                        continue;
                    };
                    for (w, vp) in ws {
                        let prefix: i64 = w[..i - 1].iter().map(|&a| space.deg(a)).sum();
                        let odd = (base % 2 == 1) ^ (is_odd(mq.degree) && is_odd(prefix));
                        let mut a = Vec::with_capacity(n);
                        a.extend_from_slice(&w[..i - 1]);
                        a.extend_from_slice(u);
                        a.extend_from_slice(&w[i..]);
                        accumulate(&mut out, a, vp, &vc.clone().signed(odd));
                    }
                }
            }
        }
    }
    out
}

/// Checks `∂(m_n) = Σ (−1)^{qp+(q−1)i} m_p ∘_i m_q` on every basis tuple for
/// `2 ≤ n ≤ max_arity`. Only tuples in the support of some term can be
/// nonzero, so those are the ones evaluated.
pub fn check_stasheff(s: &AInfStructure, max_arity: usize) -> Result<StasheffReport> {
    check_stasheff_with(s, max_arity, SignRule::Standard)
}

pub fn check_stasheff_with(
    s: &AInfStructure,
    max_arity: usize,
    rule: SignRule,
) -> Result<StasheffReport> {
    let pre = s.complex.d_preimages();
    let space = s.complex.space().clone();
    let per_arity: Vec<(u64, u64, Vec<StasheffViolation>)> = (2..=max_arity.max(2))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let lhs = boundary(s, n, &pre);
            let rhs = composites(s, n, rule);
            let mut keys: Vec<&Vec<usize>> = lhs.keys().chain(rhs.keys()).collect();
            keys.sort();
            keys.dedup();
            let zero = SparseVec::new();
            let mut count = 0;
            let mut bad = Vec::new();
            for k in &keys {
                let l = lhs.get(*k).unwrap_or(&zero);
                let r = rhs.get(*k).unwrap_or(&zero);
                if l != r {
                    count += 1;
                    if bad.len() < MAX_REPORTED {
                        bad.push(StasheffViolation {
                            arity: n,
                            inputs: tuple_name(&space, k),
                            lhs: space.fmt_vec(l),
                            rhs: space.fmt_vec(r),
                        });
                    }
                }
            }
            (keys.len() as u64, count, bad)
        })
        .collect();
    let mut tuples_checked = 0;
    let mut violation_count = 0;
    let mut violations = Vec::new();
    for (t, c, v) in per_arity {
        tuples_checked += t;
        violation_count += c;
        violations.extend(v);
    }
    violations.truncate(MAX_REPORTED);
    Ok(StasheffReport {
        ok: violation_count == 0,
        max_arity,
        tuples_checked,
        violation_count,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_operad_axioms, check_operad_morphism};

    #[test]
    fn d_mu2_vanishes_and_d_mu3_matches() {
        let op = build_ainf(4).unwrap();
        assert!(op.d_mu(2).unwrap().is_zero());
        let d3 = op.d_mu(3).unwrap();
        let g = op.gens();
        let q = Field::Rationals;
        let left = PlanarTree::parse(g, "(mu2 (mu2 _1 _2) _3)").unwrap();
        let right = PlanarTree::parse(g, "(mu2 _1 (mu2 _2 _3))").unwrap();
        assert_eq!(d3.coeff(&left), q.from_i64(-1));
        assert_eq!(d3.coeff(&right), q.from_i64(1));
        assert_eq!(d3.len(), 2);
    }

    #[test]
    fn term_counts() {
        let op = build_ainf(7).unwrap();
        for n in 2..=7 {
            assert_eq!(op.d_mu(n).unwrap().len(), n * (n - 1) / 2 - 1);
        }
    }

    #[test]
    fn d_squared_to_arity_five() {
        let cert = certify_ainf_d_squared(5).unwrap();
        assert!(cert.ok, "{:?}", cert.d_squared.violations.first());
    }

    #[test]
    fn mutated_sign_fails_early() {
        let op = build_ainf_with(Field::Rationals, 4, SignRule::Mutated).unwrap();
        let cert = certify_operad(&op).unwrap();
        assert!(!cert.ok);
        assert!(cert.d_squared.violations.iter().all(|v| v.arity <= 4));
    }

    #[test]
    fn finite_table_is_a_dg_operad() {
        let op = build_ainf(4).unwrap();
        let t = ainf_operad_table(&op, 4).unwrap();
        let dims: Vec<usize> = (0..=4).map(|n| t.component(n).dim()).collect();
        assert_eq!(dims, vec![0, 1, 1, 3, 11]);
        let r = check_operad_axioms(&t, 4).unwrap();
        assert!(r.ok, "{:?}", r.violations.first());
    }

    #[test]
    fn quotient_to_ass() {
        let f = build_quotient_to_ass(4).unwrap();
        assert!(check_operad_morphism(&f, 4).unwrap().ok);
        let c3 = f.source().component(3);
        let k = c3.index_of("(mu3 _1 _2 _3)").unwrap();
        assert!(f.map(3).column(k).map_or(true, SparseVec::is_zero));
        let comb = c3.index_of("(mu2 (mu2 _1 _2) _3)").unwrap();
        assert_eq!(f.map(3).entry(0, comb), Field::Rationals.one());
    }

    fn two_dim() -> ChainComplex {
        ChainComplex::with_zero_differential(Arc::new(
            GradedSpace::from_pairs(Field::Rationals, [("a", 0), ("b", 0)]).unwrap(),
        ))
    }

    #[test]
    fn non_associative_product_fails_at_arity_three() {
        let c = two_dim();
        let q = Field::Rationals;
        let mut m2 = MultiMap::new(2, 0);
        // a·a = b, b·a = a, everything else zero.
        m2.set(c.space(), vec![0, 0], SparseVec::basis(1, q))
            .unwrap();
        m2.set(c.space(), vec![1, 0], SparseVec::basis(0, q))
            .unwrap();
        let s = AInfStructure::new(c, BTreeMap::from([(2, m2)])).unwrap();
        let r = check_stasheff(&s, 4).unwrap();
        assert!(!r.ok);
        assert_eq!(r.first_violation_arity(), Some(3));
    }

    #[test]
    fn associative_product_passes() {
        let c = two_dim();
        let q = Field::Rationals;
        let mut m2 = MultiMap::new(2, 0);
        m2.set(c.space(), vec![0, 0], SparseVec::basis(0, q))
            .unwrap();
        m2.set(c.space(), vec![1, 1], SparseVec::basis(1, q))
            .unwrap();
        let s = AInfStructure::new(c, BTreeMap::from([(2, m2)])).unwrap();
        assert!(check_stasheff(&s, 5).unwrap().ok);
    }

    #[test]
    fn structure_json_round_trip() {
        let c = two_dim();
        let q = Field::Rationals;
        let mut m2 = MultiMap::new(2, 0);
        m2.set(
            c.space(),
            vec![0, 1],
            SparseVec::basis(1, q).scaled(&q.from_i64(3)),
        )
        .unwrap();
        let s = AInfStructure::new(c, BTreeMap::from([(2, m2)])).unwrap();
        let back = AInfStructure::from_json(&s.to_json()).unwrap();
        assert_eq!(back.op(2), s.op(2));
    }

    #[test]
    fn wrong_degree_rejected() {
        let c = two_dim();
        let s = AInfStructure::new(c, BTreeMap::from([(3, MultiMap::new(3, 0))]));
        assert!(matches!(s, Err(Error::Degree(_))));
    }
}
