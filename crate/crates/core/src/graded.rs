//! Graded vector spaces, homogeneous maps and chain complexes.
//!
//! Complexes use homological grading: the differential has degree −1.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Separator used in the names of tensor basis elements.
pub const TENSOR_SEP: &str = "⊗";

/// `(-1)^(Σ a·b)` over `a ∈ left`, `b ∈ right`: the sign picked up when the
/// block with degrees `right` moves past the block with degrees `left`.
pub fn koszul_sign(left: &[i64], right: &[i64]) -> i32 {
    if koszul_odd(left.iter().sum(), right.iter().sum()) {
        -1
    } else {
        1
    }
}

/// Parity of `a·b`.
#[inline]
pub fn koszul_odd(a: i64, b: i64) -> bool {
    (a & 1) == 1 && (b & 1) == 1
}

#[inline]
pub fn is_odd(a: i64) -> bool {
    a & 1 == 1
}

/// Sparse vector in a fixed basis; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(BTreeMap<usize, Scalar>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(BTreeMap::new())
    }

    pub fn basis(i: usize, field: Field) -> Self {
        let mut v = SparseVec::new();
        v.0.insert(i, field.one());
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in terms {
            v.add_term(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.0.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&i) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.0.remove(&i);
                }
            }
            None => {
                self.0.insert(i, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SparseVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, &(x * c));
        }
    }

    pub fn add(&mut self, other: &SparseVec) {
        for (i, x) in other.iter() {
            self.add_term(i, x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn negated(&self) -> SparseVec {
        SparseVec(self.0.iter().map(|(i, x)| (*i, -x)).collect())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (i, x) in other.iter() {
            out.add_term(i, &-x);
        }
        out
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        SparseVec::from_terms(iter)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElem {
    pub name: String,
    pub deg: i64,
}

/// A finite-dimensional graded vector space with a named basis.
#[derive(Clone, Debug)]
pub struct GradedSpace {
    field: Field,
    basis: Vec<BasisElem>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis == other.basis
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new(field: Field, basis: Vec<BasisElem>) -> Result<Self> {
        let mut index = HashMap::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::DuplicateBasis(b.name.clone()));
            }
        }
        Ok(GradedSpace {
            field,
            basis,
            index,
        })
    }

    /// Convenience constructor from `(name, degree)` pairs.
    pub fn from_pairs<S: Into<String>>(
        field: Field,
        pairs: impl IntoIterator<Item = (S, i64)>,
    ) -> Result<Self> {
        GradedSpace::new(
            field,
            pairs
                .into_iter()
                .map(|(name, deg)| BasisElem {
                    name: name.into(),
                    deg,
                })
                .collect(),
        )
    }

    pub fn zero(field: Field) -> Self {
        GradedSpace::new(field, Vec::new()).expect("empty basis")
    }

    /// The one-dimensional space concentrated in degree `deg`.
    pub fn line(field: Field, name: &str, deg: i64) -> Self {
        GradedSpace::from_pairs(field, [(name, deg)]).expect("single basis element")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.basis[i].deg
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.deg).collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.deg).or_insert(0) += 1;
        }
        out
    }

    /// Degree of a vector if it is homogeneous; `None` for the zero vector.
    pub fn homogeneous_degree(&self, v: &SparseVec) -> Result<Option<i64>> {
        let degs: BTreeSet<i64> = v.indices().map(|i| self.deg(i)).collect();
        match degs.len() {
            0 => Ok(None),
            1 => Ok(degs.into_iter().next()),
            _ => Err(Error::Degree(format!(
                "vector is not homogeneous: {degs:?}"
            ))),
        }
    }

    pub fn fmt_vec(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| format!("{c}·{}", self.name(i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn vec_to_json(&self, v: &SparseVec) -> Value {
        Value::Array(
            v.iter()
                .map(|(i, c)| json!([self.name(i), c.to_json()]))
                .collect(),
        )
    }

    /// Reads `[[name, coeff], ...]`.
    pub fn vec_from_json(&self, value: &Value) -> Result<SparseVec> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Parse("vector must be a list of [name, coeff]".into()))?;
        let mut v = SparseVec::new();
        for item in items {
            let pair = item
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse(format!("bad vector entry {item}")))?;
            let name = pair[0]
                .as_str()
                .ok_or_else(|| Error::Parse(format!("bad basis name {}", pair[0])))?;
            v.add_term(self.index_of(name)?, &self.field.parse_scalar(&pair[1])?);
        }
        Ok(v)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_json(),
            "basis": self.basis.iter().map(|b| json!({"name": b.name, "deg": b.deg})).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = Field::from_json(
            value
                .get("field")
                .ok_or_else(|| Error::Parse("graded space needs 'field'".into()))?,
        )?;
        let items = value
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("graded space needs 'basis' list".into()))?;
        let mut basis = Vec::with_capacity(items.len());
        for item in items {
            let name = item
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("basis entry {item} needs 'name'")))?;
            let deg = item
                .get("deg")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::Parse(format!("basis entry {item} needs 'deg'")))?;
            basis.push(BasisElem {
                name: name.to_string(),
                deg,
            });
        }
        GradedSpace::new(field, basis)
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⟨", self.field)?;
        for (k, b) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", b.name, b.deg)?;
        }
        write!(f, "⟩")
    }
}

/// `a ⊗ b` with basis the ordered pairs in lexicographic order.
pub fn tensor_space(a: &GradedSpace, b: &GradedSpace) -> Result<GradedSpace> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(
            a.field.to_string(),
            b.field.to_string(),
        ));
    }
    let mut basis = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.basis {
        for y in &b.basis {
            basis.push(BasisElem {
                name: format!("{}{TENSOR_SEP}{}", x.name, y.name),
                deg: x.deg + y.deg,
            });
        }
    }
    GradedSpace::new(a.field, basis)
}

/// `M^{⊗n}`; the zeroth power is the ground field in degree 0, named `1`.
pub fn tensor_power(m: &GradedSpace, n: usize) -> Result<GradedSpace> {
    let mut out = GradedSpace::line(m.field, "1", 0);
    for k in 0..n {
        out = if k == 0 {
            m.clone()
        } else {
            tensor_space(&out, m)?
        };
    }
    Ok(out)
}

/// A homogeneous linear map stored column-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogMap {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    degree: i64,
    cols: BTreeMap<usize, SparseVec>,
}

impl HomogMap {
    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i64) -> Self {
        HomogMap {
            source,
            target,
            degree,
            cols: BTreeMap::new(),
        }
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let field = space.field();
        let cols = (0..space.dim())
            .map(|i| (i, SparseVec::basis(i, field)))
            .collect();
        HomogMap {
            source: space.clone(),
            target: space,
            degree: 0,
            cols,
        }
    }

    /// Builds a map from `(out, in, coeff)` triples, checking homogeneity.
    pub fn new(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i64,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(
                source.field().to_string(),
                target.field().to_string(),
            ));
        }
        let mut map = HomogMap::zero(source, target, degree);
        for (out, inp, c) in entries {
            map.add_entry(out, inp, &c)?;
        }
        Ok(map)
    }

    pub fn add_entry(&mut self, out: usize, inp: usize, c: &Scalar) -> Result<()> {
        if out >= self.target.dim() || inp >= self.source.dim() {
            return Err(Error::Shape(format!("entry ({out}, {inp}) out of range")));
        }
        if c.is_zero() {
            return Ok(());
        }
        if self.target.deg(out) != self.source.deg(inp) + self.degree {
            return Err(Error::Degree(format!(
                "entry {} <- {} does not have degree {}",
                self.target.name(out),
                self.source.name(inp),
                self.degree
            )));
        }
        let col = self.cols.entry(inp).or_default();
        col.add_term(out, c);
        if col.is_zero() {
            self.cols.remove(&inp);
        }
        Ok(())
    }

    /// Sets column `inp`, checking degrees.
    pub fn set_column(&mut self, inp: usize, col: SparseVec) -> Result<()> {
        self.cols.remove(&inp);
        for (out, c) in col.iter() {
            self.add_entry(out, inp, c)?;
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn column(&self, inp: usize) -> Option<&SparseVec> {
        self.cols.get(&inp)
    }

    pub fn columns(&self) -> impl Iterator<Item = (usize, &SparseVec)> + '_ {
        self.cols.iter().map(|(i, c)| (*i, c))
    }

    pub fn entry(&self, out: usize, inp: usize) -> Scalar {
        self.cols
            .get(&inp)
            .and_then(|c| c.get(out))
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.cols
            .iter()
            .flat_map(|(inp, col)| col.iter().map(move |(out, c)| (out, *inp, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            if let Some(col) = self.cols.get(&i) {
                out.add_scaled(col, c);
            }
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> HomogMap {
        let mut out = HomogMap::zero(self.source.clone(), self.target.clone(), self.degree);
        for (i, col) in &self.cols {
            let v = col.scaled(c);
            if !v.is_zero() {
                out.cols.insert(*i, v);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "deg": self.degree,
            "entries": self
                .entries()
                .map(|(o, i, c)| json!([self.target.name(o), self.source.name(i), c.to_json()]))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(
        value: &Value,
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
    ) -> Result<Self> {
        let degree = value
            .get("deg")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("map needs integer 'deg'".into()))?;
        let items = value
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("map needs 'entries' list".into()))?;
        let field = source.field();
        let mut map = HomogMap::zero(source, target, degree);
        for item in items {
            let triple = item
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::Parse(format!("bad map entry {item}")))?;
            let name = |v: &Value| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Parse(format!("bad basis name {v}")))
            };
            let out = map.target.index_of(&name(&triple[0])?)?;
            let inp = map.source.index_of(&name(&triple[1])?)?;
            let c = field.parse_scalar(&triple[2])?;
            map.add_entry(out, inp, &c)?;
        }
        Ok(map)
    }
}

/// `g ∘ f`.
pub fn compose_maps(g: &HomogMap, f: &HomogMap) -> Result<HomogMap> {
    if f.target != g.source && *f.target != *g.source {
        return Err(Error::Shape("target(f) ≠ source(g)".into()));
    }
    let mut out = HomogMap::zero(f.source.clone(), g.target.clone(), f.degree + g.degree);
    for (inp, col) in &f.cols {
        let v = g.apply(col);
        if !v.is_zero() {
            out.cols.insert(*inp, v);
        }
    }
    Ok(out)
}

/// Sum of two maps with identical shape and degree.
pub fn add_maps(a: &HomogMap, b: &HomogMap) -> Result<HomogMap> {
    if a.degree != b.degree || *a.source != *b.source || *a.target != *b.target {
        return Err(Error::Shape("cannot add maps of different shape".into()));
    }
    let mut out = a.clone();
    for (inp, col) in &b.cols {
        let slot = out.cols.entry(*inp).or_default();
        slot.add(col);
        if slot.is_zero() {
            out.cols.remove(inp);
        }
    }
    Ok(out)
}

/// A finite-dimensional chain complex.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    space: Arc<GradedSpace>,
    d: HomogMap,
}

impl ChainComplex {
    pub fn new(space: Arc<GradedSpace>, d: HomogMap) -> Result<Self> {
        if d.degree() != -1 {
            return Err(Error::Degree(format!(
                "differential has degree {}, expected -1",
                d.degree()
            )));
        }
        if *d.source != *space || *d.target != *space {
            return Err(Error::Shape("differential must be an endomorphism".into()));
        }
        if !compose_maps(&d, &d)?.is_zero() {
            return Err(Error::NotComplex);
        }
        Ok(ChainComplex { space, d })
    }

    pub fn with_zero_differential(space: Arc<GradedSpace>) -> Self {
        let d = HomogMap::zero(space.clone(), space.clone(), -1);
        ChainComplex { space, d }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn d(&self) -> &HomogMap {
        &self.d
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// For each basis element `b`, the pairs `(a, c)` with `d(a) = … + c·b + …`.
    pub fn d_preimages(&self) -> Vec<Vec<(usize, Scalar)>> {
        let mut out = vec![Vec::new(); self.dim()];
        for (o, i, c) in self.d.entries() {
            out[o].push((i, c.clone()));
        }
        out
    }

    /// `{"space": GradedSpace, "d": HomogMap}`
    pub fn to_json(&self) -> Value {
        json!({ "space": self.space.to_json(), "d": self.d.to_json() })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let space = Arc::new(GradedSpace::from_json(
            value
                .get("space")
                .ok_or_else(|| Error::Parse("complex needs 'space'".into()))?,
        )?);
        match value.get("d") {
            Some(d) if !d.is_null() => {
                let d = HomogMap::from_json(d, space.clone(), space.clone())?;
                ChainComplex::new(space, d)
            }
            _ => Ok(ChainComplex::with_zero_differential(space)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[], &[5]), 1);
        assert_eq!(koszul_sign(&[1], &[1]), -1);
        assert_eq!(koszul_sign(&[2, 3], &[1, 1]), 1);
        assert_eq!(koszul_sign(&[-1], &[3]), -1);
    }

    #[test]
    fn tensor_examples() {
        let unit = GradedSpace::line(q(), "1", 0);
        let s = GradedSpace::line(q(), "e", 7);
        let t = tensor_space(&unit, &s).unwrap();
        assert_eq!(t.degrees(), vec![7]);

        let a = GradedSpace::from_pairs(q(), [("a", 0), ("b", 0)]).unwrap();
        let b = GradedSpace::from_pairs(q(), [("x", 0), ("y", 0), ("z", 0)]).unwrap();
        assert_eq!(tensor_space(&a, &b).unwrap().dim(), 6);

        let c = GradedSpace::from_pairs(q(), [("u", 0), ("v", 1)]).unwrap();
        let cc = tensor_space(&c, &c).unwrap();
        assert_eq!(cc.degrees(), vec![0, 1, 1, 2]);
        assert_eq!(cc.name(1), "u⊗v");

        let f2 = GradedSpace::line(Field::prime(2).unwrap(), "e", 0);
        assert!(matches!(
            tensor_space(&a, &f2),
            Err(Error::FieldMismatch(_, _))
        ));
    }

    #[test]
    fn tensor_power_zero_is_ground_field() {
        let m = GradedSpace::from_pairs(q(), [("a", 1), ("b", 2)]).unwrap();
        let p0 = tensor_power(&m, 0).unwrap();
        assert_eq!(p0.dim(), 1);
        assert_eq!(p0.deg(0), 0);
        assert_eq!(tensor_power(&m, 3).unwrap().dim(), 8);
    }

    fn small_complex() -> ChainComplex {
        let space = Arc::new(GradedSpace::from_pairs(q(), [("a", 1), ("b", 0), ("c", 0)]).unwrap());
        let d = HomogMap::new(
            space.clone(),
            space.clone(),
            -1,
            [(1, 0, q().from_i64(2)), (2, 0, q().from_i64(-1))],
        )
        .unwrap();
        ChainComplex::new(space, d).unwrap()
    }

    #[test]
    fn compose_identity_and_d_squared() {
        let c = small_complex();
        let id = HomogMap::identity(c.space().clone());
        assert_eq!(compose_maps(&id, c.d()).unwrap(), *c.d());
        assert!(compose_maps(c.d(), c.d()).unwrap().is_zero());
    }

    #[test]
    fn rejects_inhomogeneous_entry() {
        let space = Arc::new(GradedSpace::from_pairs(q(), [("a", 1), ("b", 1)]).unwrap());
        let r = HomogMap::new(space.clone(), space, -1, [(1, 0, q().one())]);
        assert!(matches!(r, Err(Error::Degree(_))));
    }

    #[test]
    fn rejects_non_complex() {
        let space = Arc::new(GradedSpace::from_pairs(q(), [("a", 2), ("b", 1), ("c", 0)]).unwrap());
        let d = HomogMap::new(
            space.clone(),
            space.clone(),
            -1,
            [(1, 0, q().one()), (2, 1, q().one())],
        )
        .unwrap();
        assert!(matches!(
            ChainComplex::new(space, d),
            Err(Error::NotComplex)
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = small_complex();
        let back = ChainComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedSpace::from_pairs(q(), [("a", 0), ("a", 1)]).is_err());
    }
}
