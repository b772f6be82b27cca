//! Structure constants of (unital) associative algebras on a based module
//! `F = 𝕜^n`: the defining ideals, finite-field point enumeration, units and
//! the `GL_n` action.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

/// Default cap on the number of candidate tensors scanned.
pub const DEFAULT_BUDGET: u128 = 1 << 24;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "OPERADIC_BUDGET";

pub fn budget_from_env() -> Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u128>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| Error::Invalid(format!("{BUDGET_ENV} must be a positive integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `c[i][j][k] = c_{ij}^k`, the coefficient of `e_k` in `e_i e_j` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SCTensor {
    n: usize,
    field: Field,
    c: Vec<Scalar>,
}

impl SCTensor {
    pub fn new(n: usize, field: Field, c: Vec<Scalar>) -> Result<Self> {
        if n == 0 || c.len() != n * n * n {
            return Err(Error::Shape(format!(
                "need {} entries for n = {n}",
                n * n * n
            )));
        }
        if c.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch("entry".into(), field.to_string()));
        }
        Ok(SCTensor { n, field, c })
    }

    pub fn zero(n: usize, field: Field) -> Self {
        SCTensor {
            n,
            field,
            c: vec![field.zero(); n * n * n],
        }
    }

    pub fn from_fn(n: usize, field: Field, f: impl Fn(usize, usize, usize) -> Scalar) -> Self {
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c.push(f(i, j, k));
                }
            }
        }
        SCTensor { n, field, c }
    }

    /// Componentwise product on `𝕜^n`: `e_i e_j = δ_{ij} e_i`.
    pub fn diagonal(n: usize, field: Field) -> Self {
        SCTensor::from_fn(n, field, |i, j, k| {
            if i == j && j == k {
                field.one()
            } else {
                field.zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.n + j) * self.n + k]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.c
    }

    fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.n;
        let mut out = vec![self.field.zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.get(i, j, k);
                    if !c.is_zero() {
                        *slot += &(&xy * c);
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.n];
        v[i] = self.field.one();
        v
    }

    /// `(e_i e_j) e_k = e_i (e_j e_k)` for all basis triples.
    pub fn is_associative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ij = self.mul(&self.basis(i), &self.basis(j));
                (0..n).all(|k| {
                    let jk = self.mul(&self.basis(j), &self.basis(k));
                    self.mul(&ij, &self.basis(k)) == self.mul(&self.basis(i), &jk)
                })
            })
        })
    }

    /// The `2n² × n` system `Σ_i a_i c_{ij}^k = δ_{jk}`, `Σ_i c_{ji}^k a_i = δ_{jk}`.
    fn unit_system(&self) -> (Matrix, Vec<Scalar>) {
        let n = self.n;
        let f = self.field;
        let mut m = Matrix::zeros(f, 2 * n * n, n);
        let mut rhs = Vec::with_capacity(2 * n * n);
        for side in 0..2 {
            for j in 0..n {
                for k in 0..n {
                    let r = side * n * n + j * n + k;
                    for i in 0..n {
                        let c = if side == 0 {
                            self.get(i, j, k)
                        } else {
                            self.get(j, i, k)
                        };
                        m.set(r, i, c.clone());
                    }
                    rhs.push(if j == k { f.one() } else { f.zero() });
                }
            }
        }
        (m, rhs)
    }

    /// A two-sided unit `Σ a_i e_i`, if one exists.
    pub fn find_unit(&self) -> Option<Vec<Scalar>> {
        let (m, rhs) = self.unit_system();
        m.solve(&rhs)
    }

    /// `g·c`, the structure constants of `x ∗ y = g(g⁻¹x · g⁻¹y)`:
    /// `(g·c)_{ij}^k = Σ h_{ai} h_{bj} c_{ab}^l g_{kl}` with `h = g⁻¹`.
    pub fn act(&self, g: &Matrix, h: &Matrix) -> SCTensor {
        let n = self.n;
        let f = self.field;
        // t[i][j][l] = Σ_{a,b} h_{ai} h_{bj} c_{ab}^l
        let mut t = vec![f.zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    let hai = h.get(a, i);
                    if hai.is_zero() {
                        continue;
                    }
                    for b in 0..n {
                        let hbj = h.get(b, j);
                        if hbj.is_zero() {
                            continue;
                        }
                        let w = hai * hbj;
                        for l in 0..n {
                            let c = self.get(a, b, l);
                            if !c.is_zero() {
                                t[(i * n + j) * n + l] += &(&w * c);
                            }
                        }
                    }
                }
            }
        }
        SCTensor::from_fn(n, f, |i, j, k| {
            let mut s = f.zero();
            for l in 0..n {
                s += &(g.get(k, l) * &t[(i * n + j) * n + l]);
            }
            s
        })
    }

    pub fn to_json(&self) -> Value {
        let n = self.n;
        Value::Array(
            (0..n)
                .map(|i| {
                    Value::Array(
                        (0..n)
                            .map(|j| {
                                Value::Array((0..n).map(|k| self.get(i, j, k).to_json()).collect())
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Polynomials with integer coefficients; a monomial is the sorted list of
/// its variable indices, with repetition.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Vec<usize>, i64>,
}

impl Poly {
    pub fn add_term(&mut self, mut mono: Vec<usize>, c: i64) {
        mono.sort_unstable();
        let e = self.terms.entry(mono.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &i64)> {
        self.terms.iter()
    }

    /// Total degree of every term, if they agree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(Vec::len);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn eval(&self, field: Field, values: &[Scalar]) -> Scalar {
        let mut s = field.zero();
        for (mono, &c) in &self.terms {
            let mut t = field.from_i64(c);
            for &v in mono {
                t = &t * &values[v];
            }
            s += &t;
        }
        s
    }

    /// `[[coeff, [[var, exp], …]], …]`.
    pub fn to_json(&self, vars: &[String]) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(mono, c)| {
                    let mut exps: BTreeMap<usize, u32> = BTreeMap::new();
                    for &v in mono {
                        *exps.entry(v).or_insert(0) += 1;
                    }
                    let m: Vec<Value> = exps.iter().map(|(v, e)| json!([vars[*v], e])).collect();
                    json!([c, m])
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyIdeal {
    pub variables: Vec<String>,
    pub generators: Vec<Poly>,
}

impl PolyIdeal {
    pub fn to_json(&self) -> Value {
        json!({
            "variables": self.variables,
            "generators": self.generators.iter().map(|g| g.to_json(&self.variables)).collect::<Vec<_>>(),
        })
    }

    /// True iff every generator vanishes at `values`.
    pub fn vanishes_at(&self, field: Field, values: &[Scalar]) -> bool {
        self.generators
            .iter()
            .all(|g| g.eval(field, values).is_zero())
    }
}

fn c_var(n: usize, i: usize, j: usize, k: usize) -> usize {
    (i * n + j) * n + k
}

fn variables(n: usize, unital: bool) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                v.push(format!("c_{{{i},{j}}}^{{{k}}}"));
            }
        }
    }
    if unital {
        v.extend((1..=n).map(|i| format!("a_{{{i}}}")));
    }
    v
}

fn assoc_generators(n: usize) -> Vec<Poly> {
    let mut gens = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut p = Poly::default();
                    for m in 0..n {
                        p.add_term(vec![c_var(n, i, j, m), c_var(n, m, k, l)], 1);
                        p.add_term(vec![c_var(n, i, m, l), c_var(n, j, k, m)], -1);
                    }
                    gens.push(p);
                }
            }
        }
    }
    gens
}

/// `Σ_m (c_{ij}^m c_{mk}^l − c_{im}^l c_{jk}^m)` for all `(i, j, k, l)`.
pub fn assoc_ideal(n: usize) -> Result<PolyIdeal> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    Ok(PolyIdeal {
        variables: variables(n, false),
        generators: assoc_generators(n),
    })
}

/// The associativity generators plus `δ_{jk} − Σ_i a_i c_{ij}^k` and
/// `δ_{jk} − Σ_i c_{ji}^k a_i`.
pub fn unital_ideal(n: usize) -> Result<PolyIdeal> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let mut generators = assoc_generators(n);
    let a = |i: usize| n * n * n + i;
    for side in 0..2 {
        for j in 0..n {
            for k in 0..n {
                let mut p = Poly::default();
                if j == k {
                    p.add_term(vec![], 1);
                }
                for i in 0..n {
                    let c = if side == 0 {
                        c_var(n, i, j, k)
                    } else {
                        c_var(n, j, i, k)
                    };
                    p.add_term(vec![a(i), c], -1);
                }
                generators.push(p);
            }
        }
    }
    Ok(PolyIdeal {
        variables: variables(n, true),
        generators,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub c: SCTensor,
    pub unit: Option<Vec<Scalar>>,
}

impl Point {
    pub fn to_json(&self) -> Value {
        let mut v = json!({"c": self.c.to_json()});
        if let Some(u) = &self.unit {
            v["unit"] = Value::Array(u.iter().map(Scalar::to_json).collect());
        }
        v
    }
}

fn prime_field(q: u64) -> Result<Field> {
    Field::prime(q).map_err(|_| Error::Invalid(format!("q = {q} must be prime")))
}

fn candidate_count(q: u64, vars: usize, budget: u128) -> Result<u128> {
    let needed = (q as u128).checked_pow(vars as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    Ok(needed)
}

/// Base-`q` digits of `idx`, most significant first.
fn digits(mut idx: u128, q: u64, len: usize) -> Vec<u64> {
    let mut d = vec![0; len];
    for slot in d.iter_mut().rev() {
        *slot = (idx % q as u128) as u64;
        idx /= q as u128;
    }
    d
}

/// Associativity on raw residues mod `p`.
fn assoc_mod_p(c: &[u64], n: usize, p: u64) -> bool {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0u64;
                    for m in 0..n {
                        s += c[c_var(n, i, j, m)] * c[c_var(n, m, k, l)] % p;
                        s += p - c[c_var(n, i, m, l)] * c[c_var(n, j, k, m)] % p;
                    }
                    if s % p != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All associative structure constants over `F_q` (`q` prime), in
/// lexicographic order of the entry list; with `unital`, only those with a
/// unit, which is attached.
pub fn enumerate_points(n: usize, q: u64, unital: bool, budget: u128) -> Result<Vec<Point>> {
    let field = prime_field(q)?;
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let total = candidate_count(q, n * n * n, budget)?;
    let chunk: u128 = 1 << 14;
    let chunks: Vec<u128> = (0..total.div_ceil(chunk)).collect();
    let found: Vec<Vec<Point>> = chunks
        .par_iter()
        .map(|&k| {
            let mut out = Vec::new();
            for idx in k * chunk..((k + 1) * chunk).min(total) {
                let d = digits(idx, q, n * n * n);
                if !assoc_mod_p(&d, n, q) {
                    continue;
                }
                let c = SCTensor {
                    n,
                    field,
                    c: d.iter().map(|&x| field.from_i64(x as i64)).collect(),
                };
                let unit = c.find_unit();
                if unital && unit.is_none() {
                    continue;
                }
                out.push(Point { c, unit });
            }
            out
        })
        .collect();
    Ok(found.into_iter().flatten().collect())
}

/// Point counts obtained by evaluating the ideal generators instead of the
/// product: every `c` on which the associativity generators vanish, and
/// every `(c, a)` on which the unital generators vanish.
pub fn count_points_by_ideal(n: usize, q: u64, budget: u128) -> Result<(u64, u64)> {
    let field = prime_field(q)?;
    let r = assoc_ideal(n)?;
    let s = unital_ideal(n)?;
    let total = candidate_count(q, n * n * n + n, budget)?;
    let elems: Vec<Scalar> = (0..q).map(|x| field.from_i64(x as i64)).collect();
    let cs = (q as u128).pow((n * n * n) as u32);
    let mut assoc = 0;
    let mut unital = 0;
    for idx in 0..cs {
        let vals: Vec<Scalar> = digits(idx, q, n * n * n)
            .into_iter()
            .map(|x| elems[x as usize].clone())
            .collect();
        if !r.vanishes_at(field, &vals) {
            continue;
        }
        assoc += 1;
        for a in 0..(q as u128).pow(n as u32) {
            let mut full = vals.clone();
            full.extend(
                digits(a, q, n)
                    .into_iter()
                    .map(|x| elems[x as usize].clone()),
            );
            if s.vanishes_at(field, &full) {
                unital += 1;
            }
        }
    }
    debug_assert!(cs * (q as u128).pow(n as u32) == total);
    Ok((assoc, unital))
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitCertificate {
    /// `"none"` or `"unique"`.
    pub solutions: &'static str,
    pub rank: usize,
    pub unknowns: usize,
    pub unit: Option<Vec<Value>>,
}

/// The unit system has no solution or exactly one: it is consistent iff it
/// has a solution, and then the solution is unique iff the rank is `n`.
pub fn unit_uniqueness_certificate(c: &SCTensor) -> Result<UnitCertificate> {
    if !c.is_associative() {
        return Err(Error::Precondition(
            "structure constants are not associative".into(),
        ));
    }
    let (m, rhs) = c.unit_system();
    let rank = m.rank();
    let unit = m.solve(&rhs);
    let solutions = match (&unit, rank == c.n) {
        (None, _) => "none",
        (Some(_), true) => "unique",
        (Some(_), false) => {
            return Err(Error::Invalid(
                "associative structure with a non-unique unit".into(),
            ))
        }
    };
    Ok(UnitCertificate {
        solutions,
        rank,
        unknowns: c.n,
        unit: unit.map(|u| u.iter().map(Scalar::to_json).collect()),
    })
}

/// All invertible `n × n` matrices over `F_q` with their inverses.
pub fn general_linear_group(n: usize, q: u64, budget: u128) -> Result<Vec<(Matrix, Matrix)>> {
    let field = prime_field(q)?;
    let total = candidate_count(q, n * n, budget)?;
    let mut out = Vec::new();
    for idx in 0..total {
        let d = digits(idx, q, n * n);
        let rows = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| field.from_i64(d[r * n + c] as i64))
                    .collect()
            })
            .collect();
        let g = Matrix::from_rows(field, rows, n);
        if g.rank() < n {
            continue;
        }
        let mut aug = Matrix::zeros(field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, g.get(r, c).clone());
            }
            aug.set(r, n + r, field.one());
        }
        aug.rref();
        let mut h = Matrix::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                h.set(r, c, aug.get(r, n + c).clone());
            }
        }
        out.push((g, h));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub rep: Value,
    pub size: usize,
    pub stabilizer: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub convention: &'static str,
    pub group_order: usize,
    pub orbits: Vec<Orbit>,
    /// Every orbit satisfies `size · stabilizer = group_order`.
    pub orbit_stabilizer_ok: bool,
    /// The point set is closed under the action.
    pub stable: bool,
}

pub const GL_CONVENTION: &str =
    "(g.c)_{ij}^k = sum_{a,b,l} h_{ai} h_{bj} c_{ab}^l g_{kl}, h = g^-1: the product x*y = g(g^-1 x . g^-1 y); units map to g(1)";

/// Partitions `points` into `GL_n(F_q)` orbits.
pub fn gl_orbits(points: &[Point], n: usize, q: u64, budget: u128) -> Result<OrbitReport> {
    let group = general_linear_group(n, q, budget)?;
    let keys: HashSet<&SCTensor> = points.iter().map(|p| &p.c).collect();
    let mut seen: HashSet<SCTensor> = HashSet::new();
    let mut orbits = Vec::new();
    let mut stable = true;
    for p in points {
        if seen.contains(&p.c) {
            continue;
        }
        let mut orbit = HashSet::new();
        let mut stab = 0;
        for (g, h) in &group {
            let img = p.c.act(g, h);
            if img == p.c {
                stab += 1;
            }
            stable &= keys.contains(&img);
            if let Some(u) = &p.unit {
                let gu: Vec<Scalar> = (0..n)
                    .map(|k| {
                        let mut s = p.c.field().zero();
                        for (l, ul) in u.iter().enumerate() {
                            s += &(g.get(k, l) * ul);
                        }
                        s
                    })
                    .collect();
                stable &= img.find_unit().as_ref() == Some(&gu);
            }
            orbit.insert(img);
        }
        orbits.push(Orbit {
            rep: p.to_json(),
            size: orbit.len(),
            stabilizer: stab,
        });
        seen.extend(orbit);
    }
    let order = group.len();
    Ok(OrbitReport {
        convention: GL_CONVENTION,
        group_order: order,
        orbit_stabilizer_ok: orbits.iter().all(|o| o.size * o.stabilizer == order),
        orbits,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn ideal_shapes() {
        let r1 = assoc_ideal(1).unwrap();
        assert_eq!(r1.variables.len(), 1);
        assert_eq!(r1.generators.len(), 1);
        assert!(r1.generators[0].is_zero());
        let r2 = assoc_ideal(2).unwrap();
        assert_eq!((r2.variables.len(), r2.generators.len()), (8, 16));
        assert!(r2
            .generators
            .iter()
            .all(|g| g.is_zero() || g.homogeneous_degree() == Some(2)));
        let s2 = unital_ideal(2).unwrap();
        assert_eq!(s2.generators.len(), 16 + 8);
        assert_eq!(s2.variables.len(), 10);
    }

    #[test]
    fn one_dimensional_unit_generators() {
        let s = unital_ideal(1).unwrap();
        // 1 − a·c twice.
        let mut want = Poly::default();
        want.add_term(vec![], 1);
        want.add_term(vec![0, 1], -1);
        assert_eq!(s.generators[1], want);
        assert_eq!(s.generators[2], want);
    }

    #[test]
    fn diagonal_product_satisfies_unital_ideal() {
        for q in [2, 3, 5] {
            let f = fp(q);
            let c = SCTensor::diagonal(3, f);
            let mut vals = c.entries().to_vec();
            vals.extend(vec![f.one(); 3]);
            assert!(unital_ideal(3).unwrap().vanishes_at(f, &vals));
            assert_eq!(c.find_unit(), Some(vec![f.one(); 3]));
        }
    }

    #[test]
    fn one_dimensional_units() {
        let f = fp(5);
        let c = SCTensor::new(1, f, vec![f.from_i64(3)]).unwrap();
        assert!(c.is_associative());
        assert_eq!(c.find_unit(), Some(vec![f.from_i64(2)]));
        let z = SCTensor::zero(1, f);
        assert!(z.is_associative());
        assert_eq!(z.find_unit(), None);
    }

    #[test]
    fn one_dimensional_counts() {
        for q in [2u64, 3, 5] {
            assert_eq!(
                enumerate_points(1, q, false, DEFAULT_BUDGET).unwrap().len() as u64,
                q
            );
            assert_eq!(
                enumerate_points(1, q, true, DEFAULT_BUDGET).unwrap().len() as u64,
                q - 1
            );
        }
    }

    #[test]
    fn raw_kernel_matches_scalar_check() {
        let f = fp(2);
        for idx in 0..256u128 {
            let d = digits(idx, 2, 8);
            let c = SCTensor::new(2, f, d.iter().map(|&x| f.from_i64(x as i64)).collect()).unwrap();
            assert_eq!(assoc_mod_p(&d, 2, 2), c.is_associative(), "tensor {idx}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_points(3, 2, false, 1 << 20),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn non_associative_rejected_by_certificate() {
        let f = fp(2);
        // e1 e1 = e2, e2 e1 = e1.
        let c = SCTensor::from_fn(2, f, |i, j, k| {
            if (i, j, k) == (0, 0, 1) || (i, j, k) == (1, 0, 0) {
                f.one()
            } else {
                f.zero()
            }
        });
        assert!(matches!(
            unit_uniqueness_certificate(&c),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            unit_uniqueness_certificate(&SCTensor::zero(2, f))
                .unwrap()
                .solutions,
            "none"
        );
    }

    #[test]
    fn gl1_orbits() {
        let pts = enumerate_points(1, 5, false, DEFAULT_BUDGET).unwrap();
        let r = gl_orbits(&pts, 1, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.group_order, 4);
        let sizes: Vec<usize> = r.orbits.iter().map(|o| o.size).collect();
        assert_eq!(sizes, vec![1, 4]);
        assert!(r.orbit_stabilizer_ok && r.stable);
    }
}
