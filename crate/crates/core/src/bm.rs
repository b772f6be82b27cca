//! The CDGA `B_{m,r}`: free graded-commutative over ℚ on `x_2, …, x_r` with
//! `|x_n| = (n−1)(m+1) − 1` and
//! `d(x_n) = Σ_{p+q−1=n, 1≤i≤p} (−1)^{(q−1)i + (p+m(i−1))(q+1)m} x_q x_p`.
//!
//! Its dg points in a CDGA `A` are exactly the A∞ structures on `Σ^m A`
//! that are `A`-multilinear extensions of operations on the suspension
//! generator; [`induced_ainf_structure`] builds that structure.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::ainf::{AInfStructure, MultiMap};
use crate::error::{Error, Result};
use crate::graded::{is_odd, BasisElem, ChainComplex, GradedSpace, HomogMap, SparseVec};
use crate::operad::ProductTable;
use crate::scalar::{Field, Scalar};

/// `|x_n| = (n−1)(m+1) − 1`.
pub fn gen_degree(m: i64, n: usize) -> i64 {
    (n as i64 - 1) * (m + 1) - 1
}

/// Weight of `x_n`; `d` preserves it.
pub fn gen_weight(n: usize) -> usize {
    n - 1
}

/// Sorts a word of generators. Returns `None` when an odd generator repeats,
/// otherwise the sorted word and whether the Koszul sign is odd.
pub fn canonicalize(m: i64, word: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for a in 0..word.len() {
        if !is_odd(gen_degree(m, word[a])) {
            continue;
        }
        for b in a + 1..word.len() {
            if !is_odd(gen_degree(m, word[b])) {
                continue;
            }
            if word[a] == word[b] {
                return None;
            }
            if word[a] > word[b] {
                odd = !odd;
            }
        }
    }
    let mut sorted = word.to_vec();
    sorted.sort_unstable();
    Some((sorted, odd))
}

/// A graded-commutative polynomial in the `x_n`, with monomials stored as
/// sorted index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCPoly {
    m: i64,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl GCPoly {
    pub fn zero(m: i64) -> Self {
        GCPoly {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(m: i64) -> Self {
        GCPoly::word(m, &[], &Field::Rationals.one())
    }

    pub fn generator(m: i64, n: usize) -> Self {
        GCPoly::word(m, &[n], &Field::Rationals.one())
    }

    /// `c` times the product of the generators in `word`, in that order.
    pub fn word(m: i64, word: &[usize], c: &Scalar) -> Self {
        let mut p = GCPoly::zero(m);
        p.add_word(word, c);
        p
    }

    pub fn add_word(&mut self, word: &[usize], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let Some((mono, odd)) = canonicalize(self.m, word) else {
            return;
        };
        let c = c.clone().signed(odd);
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GCPoly, c: &Scalar) {
        for (w, x) in &other.terms {
            self.add_word(w, &(x * c));
        }
    }

    pub fn mul(&self, other: &GCPoly) -> GCPoly {
        let mut out = GCPoly::zero(self.m);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_word(&w, &(a * b));
            }
        }
        out
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn monomial_degree(&self, mono: &[usize]) -> i64 {
        mono.iter().map(|&n| gen_degree(self.m, n)).sum()
    }

    /// `[[coeff, [n, …]], …]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| json!([c.to_json(), w]))
                .collect(),
        )
    }
}

pub fn monomial_name(mono: &[usize]) -> String {
    if mono.is_empty() {
        return "1".into();
    }
    let mut parts = Vec::new();
    let mut k = 0;
    while k < mono.len() {
        let mut e = 1;
        while k + e < mono.len() && mono[k + e] == mono[k] {
            e += 1;
        }
        parts.push(if e == 1 {
            format!("x{}", mono[k])
        } else {
            format!("x{}^{e}", mono[k])
        });
        k += e;
    }
    parts.join("*")
}

/// Sign exponent of `x_q x_p` in `d(x_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BmSign {
    /// `(q−1)i + (p+m(i−1))(q+1)m`
    Standard,
    /// `(p+m(i−1))(q+1)m`, the `(q−1)i` term dropped; a control.
    DropQi,
}

impl BmSign {
    pub fn odd(self, m: i64, p: usize, i: usize, q: usize) -> bool {
        let (p, i, q) = (p as i64, i as i64, q as i64);
        let tail = (p + m * (i - 1)) * (q + 1) * m;
        let e = match self {
            BmSign::Standard => (q - 1) * i + tail,
            BmSign::DropQi => tail,
        };
        e.rem_euclid(2) == 1
    }

    pub fn describe(self) -> &'static str {
        match self {
            BmSign::Standard => "(q-1)i+(p+m(i-1))(q+1)m",
            BmSign::DropQi => "(p+m(i-1))(q+1)m",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BmAlgebra {
    m: i64,
    r: usize,
    sign: BmSign,
    d: BTreeMap<usize, GCPoly>,
}

pub fn build_bm(m: i64, r: usize) -> Result<BmAlgebra> {
    build_bm_with(m, r, BmSign::Standard)
}

/// `B_{m,r}` is only defined over ℚ here.
pub fn build_bm_over(field: Field, m: i64, r: usize) -> Result<BmAlgebra> {
    if field != Field::Rationals {
        return Err(Error::Characteristic(
            field.characteristic(),
            "B_m is built over Q only".into(),
        ));
    }
    build_bm(m, r)
}

pub fn build_bm_with(m: i64, r: usize, sign: BmSign) -> Result<BmAlgebra> {
    if r < 2 {
        return Err(Error::Invalid("truncation r must be at least 2".into()));
    }
    let one = Field::Rationals.one();
    let mut d = BTreeMap::new();
    for n in 2..=r {
        let mut dn = GCPoly::zero(m);
        for p in 2..n {
            let q = n + 1 - p;
            for i in 1..=p {
                dn.add_word(&[q, p], &one.clone().signed(sign.odd(m, p, i, q)));
            }
        }
        d.insert(n, dn);
    }
    Ok(BmAlgebra { m, r, sign, d })
}

impl BmAlgebra {
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn sign(&self) -> BmSign {
        self.sign
    }

    pub fn degree(&self, n: usize) -> i64 {
        gen_degree(self.m, n)
    }

    pub fn d_gen(&self, n: usize) -> &GCPoly {
        &self.d[&n]
    }

    /// `d(x_{w_1} ⋯ x_{w_k}) = Σ_j (−1)^{|x_{w_1}|+…+|x_{w_{j−1}}|} ⋯ d(x_{w_j}) ⋯`.
    pub fn d_word(&self, word: &[usize], c: &Scalar, out: &mut GCPoly) {
        let mut prefix = 0;
        for (j, &n) in word.iter().enumerate() {
            if let Some(dn) = self.d.get(&n) {
                let s = c.clone().signed(is_odd(prefix));
                for (w, x) in dn.terms() {
                    let mut full = word[..j].to_vec();
                    full.extend_from_slice(w);
                    full.extend_from_slice(&word[j + 1..]);
                    out.add_word(&full, &(x * &s));
                }
            }
            prefix += gen_degree(self.m, n);
        }
    }

    pub fn d(&self, p: &GCPoly) -> GCPoly {
        let mut out = GCPoly::zero(self.m);
        for (w, c) in p.terms() {
            self.d_word(w, c, &mut out);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut d = Map::new();
        for (n, p) in &self.d {
            d.insert(n.to_string(), p.to_json());
        }
        json!({
            "m": self.m,
            "r": self.r,
            "generators": (2..=self.r).map(|n| json!({"n": n, "deg": self.degree(n)})).collect::<Vec<_>>(),
            "differential": Value::Object(d),
            "sign_exponent": self.sign.describe(),
            "product_order": "x_q x_p as written, then sorted with the Koszul sign",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BmGenerator {
    pub n: usize,
    pub deg: i64,
    pub d_terms: usize,
    pub d_squared_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BmCertificate {
    pub ok: bool,
    pub m: i64,
    pub r: usize,
    pub sign_exponent: &'static str,
    /// `m = −1`: every generator has degree −1.
    pub degenerate: bool,
    /// `|x_n| = (n−1)(m+1)−1` and every term of `d(x_n)` has degree `|x_n|−1`.
    pub degrees_ok: bool,
    pub generators: Vec<BmGenerator>,
    /// `n` with `d(d(x_n)) ≠ 0`, and the residues.
    pub violations: Vec<Value>,
}

pub fn certify_bm_d_squared(m: i64, r: usize) -> Result<BmCertificate> {
    certify_algebra(&build_bm(m, r)?)
}

pub fn certify_algebra(b: &BmAlgebra) -> Result<BmCertificate> {
    let rows: Vec<(BmGenerator, bool, Option<Value>)> = (2..=b.r)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| {
            let dn = b.d_gen(n);
            let deg = b.degree(n);
            let formula = (n as i64 - 2) + b.m * n as i64 - b.m;
            let degree_ok = deg == formula
                && dn.terms().all(|(w, _)| {
                    w.len() == 2 && w[0] + w[1] - 1 == n && dn.monomial_degree(w) == deg - 1
                });
            let dd = b.d(dn);
            let viol = (!dd.is_zero()).then(|| json!({"n": n, "residue": dd.to_json()}));
            (
                BmGenerator {
                    n,
                    deg,
                    d_terms: dn.len(),
                    d_squared_terms: dd.len(),
                },
                degree_ok,
                viol,
            )
        })
        .collect();
    let degrees_ok = rows.iter().all(|r| r.1);
    let mut generators = Vec::new();
    let mut violations = Vec::new();
    for (g, _, v) in rows {
        generators.push(g);
        violations.extend(v);
    }
    Ok(BmCertificate {
        ok: degrees_ok && violations.is_empty(),
        m: b.m,
        r: b.r,
        sign_exponent: b.sign.describe(),
        degenerate: b.m == -1,
        degrees_ok,
        generators,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearPart {
    pub m: i64,
    pub r: usize,
    /// `(n, |x_n|)` for `2 ≤ n ≤ r`.
    pub generators: Vec<(usize, i64)>,
    /// Linear terms of each `d(x_n)` modulo decomposables.
    pub linear_differential: BTreeMap<usize, Value>,
    pub differential_zero: bool,
    pub min_degree: i64,
    pub max_degree: i64,
    /// Whether `|x_n|` grows without bound as `r → ∞` (false only for `m = −1`).
    pub unbounded_as_r_grows: bool,
    pub degenerate: bool,
}

/// The quotient by the square of the augmentation ideal: generators with
/// their degrees and the induced linear differential.
pub fn linear_part(b: &BmAlgebra) -> LinearPart {
    let mut linear_differential = BTreeMap::new();
    for n in 2..=b.r {
        let lin: Vec<Value> = b
            .d_gen(n)
            .terms()
            .filter(|(w, _)| w.len() == 1)
            .map(|(w, c)| json!([c.to_json(), w[0]]))
            .collect();
        linear_differential.insert(n, Value::Array(lin));
    }
    let generators: Vec<(usize, i64)> = (2..=b.r).map(|n| (n, b.degree(n))).collect();
    LinearPart {
        m: b.m,
        r: b.r,
        differential_zero: linear_differential
            .values()
            .all(|v| v.as_array().is_some_and(Vec::is_empty)),
        linear_differential,
        min_degree: generators.iter().map(|g| g.1).min().unwrap_or(0),
        max_degree: generators.iter().map(|g| g.1).max().unwrap_or(0),
        generators,
        unbounded_as_r_grows: b.m != -1,
        degenerate: b.m == -1,
    }
}

/// A commutative dg algebra over ℚ with a unit.
#[derive(Clone, Debug)]
pub struct Cdga {
    alg: ProductTable,
}

impl Cdga {
    pub fn new(alg: ProductTable) -> Result<Self> {
        let space = alg.complex().space().clone();
        if space.field() != Field::Rationals {
            return Err(Error::Characteristic(
                space.field().characteristic(),
                "targets of B_m must be over Q".into(),
            ));
        }
        if !alg.is_associative() || !alg.is_leibniz() {
            return Err(Error::Invalid("target is not a dg algebra".into()));
        }
        match alg.unit() {
            Some(u) if alg.is_unit(u) => {}
            _ => {
                return Err(Error::Invalid(
                    "target needs a closed two-sided unit".into(),
                ))
            }
        }
        let f = space.field();
        for i in 0..space.dim() {
            for j in 0..i {
                let odd = is_odd(space.deg(i)) && is_odd(space.deg(j));
                if *alg.product(i, j) != alg.product(j, i).scaled(&f.sign(odd)) {
                    return Err(Error::Invalid(format!(
                        "{}·{} and {}·{} violate graded commutativity",
                        space.name(i),
                        space.name(j),
                        space.name(j),
                        space.name(i)
                    )));
                }
            }
        }
        Ok(Cdga { alg })
    }

    /// ℚ in degree 0.
    pub fn ground() -> Self {
        let f = Field::Rationals;
        let c = ChainComplex::with_zero_differential(Arc::new(GradedSpace::line(f, "1", 0)));
        Cdga::new(
            ProductTable::from_fn(
                c,
                |_, _| SparseVec::basis(0, f),
                Some(SparseVec::basis(0, f)),
            )
            .expect("ground field"),
        )
        .expect("ground field is a cdga")
    }

    pub fn algebra(&self) -> &ProductTable {
        &self.alg
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.alg.complex().space()
    }

    /// `{"complex": …, "product": [[out, left, right, coeff]], "unit": [[name, coeff]]}`.
    pub fn to_json(&self) -> Value {
        let space = self.space();
        let mut product = Vec::new();
        for i in 0..space.dim() {
            for j in 0..space.dim() {
                for (k, c) in self.alg.product(i, j).iter() {
                    product.push(json!([
                        space.name(k),
                        space.name(i),
                        space.name(j),
                        c.to_json()
                    ]));
                }
            }
        }
        json!({
            "complex": self.alg.complex().to_json(),
            "product": product,
            "unit": self.alg.unit().map(|u| space.vec_to_json(u)),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let complex = ChainComplex::from_json(
            v.get("complex")
                .ok_or_else(|| Error::Parse("target needs \"complex\"".into()))?,
        )?;
        let space = complex.space().clone();
        let f = space.field();
        let dim = space.dim();
        let mut table = vec![SparseVec::new(); dim * dim];
        for e in v
            .get("product")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("target needs \"product\"".into()))?
        {
            let e = e.as_array().filter(|a| a.len() == 4).ok_or_else(|| {
                Error::Parse("product entry must be [out, left, right, coeff]".into())
            })?;
            let name = |k: usize| {
                e[k].as_str()
                    .ok_or_else(|| Error::Parse("basis names must be strings".into()))
                    .and_then(|s| space.index_of(s))
            };
            let (o, i, j) = (name(0)?, name(1)?, name(2)?);
            table[i * dim + j].add_term(o, &f.parse_scalar(&e[3])?);
        }
        let unit = match v.get("unit") {
            Some(Value::Null) | None => None,
            Some(u) => Some(space.vec_from_json(u)?),
        };
        Cdga::new(ProductTable::from_fn(
            complex,
            |i, j| table[i * dim + j].clone(),
            unit,
        )?)
    }
}

/// Images of the generators: `x_n ↦ assignment[n]`; absent entries are zero.
pub type Assignment = BTreeMap<usize, SparseVec>;

fn check_assignment(b: &BmAlgebra, target: &Cdga, a: &Assignment) -> Result<()> {
    let space = target.space();
    for (&n, v) in a {
        if n < 2 || n > b.r {
            return Err(Error::Invalid(format!(
                "x{n} is not a generator of B_{{m,{}}}",
                b.r
            )));
        }
        for (k, _) in v.iter() {
            if k >= space.dim() {
                return Err(Error::Shape(format!("basis index {k} out of range")));
            }
            if space.deg(k) != b.degree(n) {
                return Err(Error::Degree(format!(
                    "x{n} has degree {} but {} has degree {}",
                    b.degree(n),
                    space.name(k),
                    space.deg(k)
                )));
            }
        }
    }
    Ok(())
}

/// The value of a polynomial under the algebra map determined by `a`.
pub fn evaluate(target: &Cdga, a: &Assignment, p: &GCPoly) -> SparseVec {
    let alg = target.algebra();
    let unit = alg.unit().cloned().unwrap_or_default();
    let mut out = SparseVec::new();
    for (w, c) in p.terms() {
        let mut v = unit.clone();
        for n in w {
            match a.get(n) {
                Some(x) => v = alg.multiply(&v, x),
                None => {
                    v = SparseVec::new();
                    break;
                }
            }
        }
        out.add_scaled(&v, c);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub ok: bool,
    /// Generators with `d(φ x_n) ≠ φ(d x_n)`.
    pub failing: Vec<usize>,
}

/// Whether `x_n ↦ a[n]` is a dg algebra map `B_{m,r} → target`.
pub fn check_dg_point(b: &BmAlgebra, target: &Cdga, a: &Assignment) -> Result<PointCheck> {
    check_assignment(b, target, a)?;
    let d = target.algebra().complex().d();
    let mut failing = Vec::new();
    for n in 2..=b.r {
        let lhs = a.get(&n).map(|v| d.apply(v)).unwrap_or_default();
        let rhs = evaluate(target, a, b.d_gen(n));
        if lhs != rhs {
            failing.push(n);
        }
    }
    Ok(PointCheck {
        ok: failing.is_empty(),
        failing,
    })
}

pub fn assignment_from_json(target: &Cdga, v: &Value) -> Result<Assignment> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("assignment must map n to an element".into()))?;
    let mut a = Assignment::new();
    for (k, x) in obj {
        let n: usize = k
            .trim_start_matches('x')
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator '{k}'")))?;
        a.insert(n, target.space().vec_from_json(x)?);
    }
    Ok(a)
}

pub fn assignment_to_json(target: &Cdga, a: &Assignment) -> Value {
    let mut m = Map::new();
    for (n, v) in a {
        m.insert(n.to_string(), target.space().vec_to_json(v));
    }
    Value::Object(m)
}

/// The A∞ structure on `Σ^m A` (basis `s·b`, degree `|b| + m`) with
/// `d(s·b) = s·d(b)` and
/// `m_n(s·b_1, …, s·b_n) = Π_i (−1)^{|b_i|(n−2+(i−1)m)} s·(b_1⋯b_n φ(x_n))`,
/// the `A`-multilinear extension of `m_n(s, …, s) = φ(x_n)·s`.
pub fn induced_ainf_structure(
    b: &BmAlgebra,
    target: &Cdga,
    a: &Assignment,
) -> Result<AInfStructure> {
    check_assignment(b, target, a)?;
    let space = target.space();
    let f = space.field();
    let m = b.m;
    let basis = space
        .basis()
        .iter()
        .map(|e| BasisElem {
            name: format!("s{}", e.name),
            deg: e.deg + m,
        })
        .collect();
    let sspace = Arc::new(GradedSpace::new(f, basis)?);
    let dt = target.algebra().complex().d();
    let entries: Vec<_> = dt.entries().map(|(o, i, c)| (o, i, c.clone())).collect();
    let sd = HomogMap::new(sspace.clone(), sspace.clone(), -1, entries)?;
    let complex = ChainComplex::new(sspace.clone(), sd)?;
    let alg = target.algebra();
    let dim = space.dim();
    let mut ops = BTreeMap::new();
    for n in 2..=b.r {
        let Some(xn) = a.get(&n).filter(|x| !x.is_zero()) else {
            continue;
        };
        let mut map = MultiMap::new(n, n as i64 - 2);
        // Depth-first over tuples, pruning once b_1⋯b_k x_n vanishes.
        let mut stack: Vec<(Vec<usize>, SparseVec, bool)> =
            vec![(Vec::new(), alg.unit().cloned().unwrap_or_default(), false)];
        while let Some((tuple, prod, odd)) = stack.pop() {
            if tuple.len() == n {
                let v = alg.multiply(&prod, xn).scaled(&f.sign(odd));
                if !v.is_zero() {
                    map.set(&sspace, tuple, v)?;
                }
                continue;
            }
            let i = tuple.len();
            for k in 0..dim {
                let next = alg.multiply(&prod, &SparseVec::basis(k, f));
                if next.is_zero() || alg.multiply(&next, xn).is_zero() {
                    continue;
                }
                let flip = is_odd(space.deg(k)) && is_odd(n as i64 - 2 + i as i64 * m);
                let mut t = tuple.clone();
                t.push(k);
                stack.push((t, next, odd ^ flip));
            }
        }
        ops.insert(n, map);
    }
    AInfStructure::new(complex, ops)
}

/// `B_{m,r}` modulo monomials of weight above `max_weight`, as a finite CDGA.
/// The generators `x_n` with `n − 1 ≤ max_weight` survive as basis elements.
pub fn weight_truncated_target(b: &BmAlgebra, max_weight: usize) -> Result<Cdga> {
    let m = b.m;
    let gens: Vec<usize> = (2..=b.r).filter(|&n| gen_weight(n) <= max_weight).collect();
    let mut monos: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier = vec![(vec![], 0usize)];
    while let Some((w, wt)) = frontier.pop() {
        let start = w.last().copied().unwrap_or(0);
        for &n in gens.iter().filter(|&&n| n >= start) {
            let nw = wt + gen_weight(n);
            if nw > max_weight {
                continue;
            }
            let mut w2 = w.clone();
            w2.push(n);
            if canonicalize(m, &w2).is_none() {
                continue;
            }
            monos.push(w2.clone());
            frontier.push((w2, nw));
        }
    }
    monos.sort_by(|a, b| {
        let wa: usize = a.iter().map(|&n| gen_weight(n)).sum();
        let wb: usize = b.iter().map(|&n| gen_weight(n)).sum();
        wa.cmp(&wb).then_with(|| a.cmp(b))
    });
    let f = Field::Rationals;
    let index: BTreeMap<Vec<usize>, usize> = monos
        .iter()
        .cloned()
        .enumerate()
        .map(|(k, w)| (w, k))
        .collect();
    let basis = monos
        .iter()
        .map(|w| BasisElem {
            name: monomial_name(w),
            deg: w.iter().map(|&n| gen_degree(m, n)).sum(),
        })
        .collect();
    let space = Arc::new(GradedSpace::new(f, basis)?);
    let to_vec = |p: &GCPoly| -> SparseVec {
        p.terms()
            .filter_map(|(w, c)| index.get(w).map(|&k| (k, c.clone())))
            .collect()
    };
    let mut d = HomogMap::zero(space.clone(), space.clone(), -1);
    for (k, w) in monos.iter().enumerate() {
        let mut dp = GCPoly::zero(m);
        b.d_word(w, &f.one(), &mut dp);
        d.set_column(k, to_vec(&dp))?;
    }
    let complex = ChainComplex::new(space, d)?;
    let alg = ProductTable::from_fn(
        complex,
        |i, j| {
            let mut w = monos[i].clone();
            w.extend_from_slice(&monos[j]);
            to_vec(&GCPoly::word(m, &w, &f.one()))
        },
        Some(SparseVec::basis(0, f)),
    )?;
    Cdga::new(alg)
}

/// `x_n ↦ λ^{n−1} x_n` into a weight truncation: a dg map for every `λ`,
/// since `d` preserves weight.
pub fn universal_assignment(target: &Cdga, lambda: &Scalar, r: usize) -> Assignment {
    let space = target.space();
    let mut a = Assignment::new();
    for n in 2..=r {
        if let Ok(k) = space.index_of(&format!("x{n}")) {
            let mut c = Field::Rationals.one();
            for _ in 0..gen_weight(n) {
                c = &c * lambda;
            }
            a.insert(n, SparseVec::from_terms([(k, c)]));
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::check_stasheff;

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    #[test]
    fn degrees() {
        for n in 2..=8 {
            assert_eq!(gen_degree(-2, n), -(n as i64));
            assert_eq!(gen_degree(0, n), n as i64 - 2);
            assert_eq!(gen_degree(-1, n), -1);
        }
    }

    #[test]
    fn d_x3_vanishes_for_m_zero() {
        let b = build_bm(0, 3).unwrap();
        assert!(b.d_gen(3).is_zero());
        assert!(b.d_gen(2).is_zero());
    }

    #[test]
    fn commutativity_and_odd_squares() {
        let m = 0;
        let x2 = GCPoly::generator(m, 2);
        let x3 = GCPoly::generator(m, 3);
        let x5 = GCPoly::generator(m, 5);
        assert_eq!(x2.mul(&x3), x3.mul(&x2));
        assert_eq!(x3.mul(&x5), x5.mul(&x3).scaled_by(&q(-1)));
        assert!(x3.mul(&x3).is_zero());
        assert!(!x2.mul(&x2).is_zero());
    }

    impl GCPoly {
        fn scaled_by(&self, c: &Scalar) -> GCPoly {
            let mut out = GCPoly::zero(self.m);
            out.add_scaled(self, c);
            out
        }
    }

    #[test]
    fn d_squared_small() {
        for m in -3..=3 {
            let c = certify_bm_d_squared(m, 6).unwrap();
            assert!(c.ok, "m = {m}: {:?}", c.violations);
        }
    }

    #[test]
    fn field_restriction() {
        assert!(matches!(
            build_bm_over(Field::prime(3).unwrap(), 0, 4),
            Err(Error::Characteristic(3, _))
        ));
    }

    #[test]
    fn linear_part_examples() {
        let lp = linear_part(&build_bm(0, 5).unwrap());
        assert!(lp.differential_zero);
        let degs: Vec<i64> = lp.generators.iter().map(|g| g.1).collect();
        assert_eq!(degs, vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_assignment_is_a_point() {
        let b = build_bm(0, 5).unwrap();
        let t = Cdga::ground();
        assert!(check_dg_point(&b, &t, &Assignment::new()).unwrap().ok);
        let a = Assignment::from([(2, SparseVec::from_terms([(0, q(7))]))]);
        assert!(check_dg_point(&b, &t, &a).unwrap().ok);
        let bad = Assignment::from([(3, SparseVec::from_terms([(0, q(1))]))]);
        assert!(matches!(
            check_dg_point(&b, &t, &bad),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn universal_point_matches_stasheff() {
        for (m, r) in [(0i64, 5usize), (-2, 6), (1, 4), (-3, 4)] {
            let b = build_bm(m, r).unwrap();
            let t = weight_truncated_target(&b, r - 1).unwrap();
            let a = universal_assignment(&t, &q(2), r);
            assert!(check_dg_point(&b, &t, &a).unwrap().ok);
            let s = induced_ainf_structure(&b, &t, &a).unwrap();
            let rep = check_stasheff(&s, r).unwrap();
            assert!(rep.ok, "m={m} r={r}: {:?}", rep.violations.first());
        }
    }

    #[test]
    fn target_json_round_trip() {
        let b = build_bm(-2, 4).unwrap();
        let t = weight_truncated_target(&b, 3).unwrap();
        let back = Cdga::from_json(&t.to_json()).unwrap();
        assert_eq!(back.to_json(), t.to_json());
    }
}
