//! Algebras over operads as operad morphisms into endomorphism operads.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{compose_maps, is_odd, ChainComplex, HomogMap, SparseVec};

use super::endo::{decode_end_index, end_basis_index};
use super::{check_operad_morphism, end_operad, EndOfMap, OperadMorphism, OperadTable};

/// A degree-0 bilinear product (and optional unit) on a complex, stored as a
/// dense table of basis products.
#[derive(Clone, Debug)]
pub struct ProductTable {
    complex: ChainComplex,
    table: Vec<SparseVec>,
    unit: Option<SparseVec>,
}

impl ProductTable {
    /// `product(i, j)` gives `e_i · e_j`; products must preserve degree.
    pub fn from_fn(
        complex: ChainComplex,
        mut product: impl FnMut(usize, usize) -> SparseVec,
        unit: Option<SparseVec>,
    ) -> Result<Self> {
        let space = complex.space().clone();
        let dim = space.dim();
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = product(i, j);
                for (k, c) in v.iter() {
                    if k >= dim {
                        return Err(Error::Shape(format!("product index {k} out of range")));
                    }
                    if !c.is_zero() && space.deg(k) != space.deg(i) + space.deg(j) {
                        return Err(Error::Degree(format!(
                            "{}·{} has a term in {}",
                            space.name(i),
                            space.name(j),
                            space.name(k)
                        )));
                    }
                }
                table.push(v);
            }
        }
        if let Some(u) = &unit {
            if u.iter().any(|(k, _)| k >= dim || space.deg(k) != 0) {
                return Err(Error::Degree("the unit must lie in degree 0".into()));
            }
        }
        Ok(ProductTable {
            complex,
            table,
            unit,
        })
    }

    /// Structure constants `c[i][j][k]`, the coefficient of `e_k` in `e_i e_j`.
    pub fn from_constants(
        complex: ChainComplex,
        c: &[Vec<Vec<crate::scalar::Scalar>>],
        unit: Option<SparseVec>,
    ) -> Result<Self> {
        ProductTable::from_fn(
            complex,
            |i, j| {
                c[i][j]
                    .iter()
                    .enumerate()
                    .map(|(k, x)| (k, x.clone()))
                    .collect()
            },
            unit,
        )
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i * self.complex.dim() + j]
    }

    pub fn multiply(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(self.product(i, j), &(x * y));
            }
        }
        out
    }

    /// The left-nested `n`-fold product as an element of `End(A)(n)`;
    /// for `n = 0` it is the unit (zero when there is none).
    pub fn n_fold(&self, n: usize) -> SparseVec {
        let dim = self.complex.dim();
        let field = self.complex.field();
        if n == 0 {
            return self.unit.clone().unwrap_or_default();
        }
        let mut out = SparseVec::new();
        let count = dim.pow(n as u32);
        for t in 0..count {
            let (_, tuple) = decode_end_index(dim, n, t);
            let mut v = SparseVec::basis(tuple[0], field);
            for &a in &tuple[1..] {
                v = self.multiply(&v, &SparseVec::basis(a, field));
            }
            for (o, c) in v.iter() {
                out.add_term(end_basis_index(dim, o, &tuple), c);
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        let dim = self.complex.dim();
        let f = self.complex.field();
        (0..dim).all(|i| {
            (0..dim).all(|j| {
                (0..dim).all(|k| {
                    let (a, b, c) = (
                        SparseVec::basis(i, f),
                        SparseVec::basis(j, f),
                        SparseVec::basis(k, f),
                    );
                    self.multiply(&self.multiply(&a, &b), &c)
                        == self.multiply(&a, &self.multiply(&b, &c))
                })
            })
        })
    }

    /// `d(ab) = d(a)b + (−1)^{|a|} a d(b)` on basis pairs.
    pub fn is_leibniz(&self) -> bool {
        let dim = self.complex.dim();
        let f = self.complex.field();
        let d = self.complex.d();
        let space = self.complex.space();
        (0..dim).all(|i| {
            (0..dim).all(|j| {
                let (a, b) = (SparseVec::basis(i, f), SparseVec::basis(j, f));
                let lhs = d.apply(self.product(i, j));
                let mut rhs = self.multiply(&d.apply(&a), &b);
                rhs.add_scaled(
                    &self.multiply(&a, &d.apply(&b)),
                    &f.sign(is_odd(space.deg(i))),
                );
                lhs == rhs
            })
        })
    }

    /// Associative, Leibniz and, if a unit is given, a closed two-sided unit.
    pub fn is_dg_algebra(&self) -> bool {
        self.is_associative()
            && self.is_leibniz()
            && self.unit.as_ref().map_or(true, |u| self.is_unit(u))
    }

    pub fn is_unit(&self, u: &SparseVec) -> bool {
        let f = self.complex.field();
        self.complex.d().apply(u).is_zero()
            && (0..self.complex.dim()).all(|i| {
                let e = SparseVec::basis(i, f);
                self.multiply(u, &e) == e && self.multiply(&e, u) == e
            })
    }
}

/// The morphism `Ass → End(A)` or `uAss → End(A)` sending the generator of
/// arity `n` to the `n`-fold product. `op` must have one-dimensional
/// components in positive arity; a nonzero arity-0 component needs a unit.
pub fn algebra_structure(op: &Arc<OperadTable>, alg: &ProductTable) -> Result<OperadMorphism> {
    let max = op.max_arity();
    let end = Arc::new(end_operad(alg.complex(), max)?);
    let mut maps = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let dim = op.component(n).dim();
        if n > 0 && dim != 1 {
            return Err(Error::Shape(format!("O({n}) must be one-dimensional")));
        }
        let mut map = HomogMap::zero(op.component(n).clone(), end.component(n).clone(), 0);
        if dim == 1 {
            if n == 0 && alg.unit().is_none() {
                return Err(Error::Precondition(
                    "a unit is required for O(0) ≠ 0".into(),
                ));
            }
            map.set_column(0, alg.n_fold(n))?;
        }
        maps.push(map);
    }
    OperadMorphism::new(op.clone(), end, maps)
}

/// `h ∘ f`, arity by arity.
pub fn compose_morphisms(f: &OperadMorphism, h: &OperadMorphism) -> Result<OperadMorphism> {
    let bound = f.max_arity().min(h.max_arity());
    let maps = (0..=bound)
        .map(|n| compose_maps(h.map(n), f.map(n)))
        .collect::<Result<Vec<_>>>()?;
    let src = f.source().clone();
    let tgt = h.target().clone();
    if src.max_arity() != bound || tgt.max_arity() != bound {
        return Err(Error::ArityBound(
            src.max_arity().max(tgt.max_arity()),
            bound,
        ));
    }
    OperadMorphism::new(src, tgt, maps)
}

/// Evaluates `x ∈ End(M)(n)` on the basis tuple `a`.
fn eval_end(x: &SparseVec, dim: usize, a: &[usize]) -> SparseVec {
    (0..dim)
        .filter_map(|o| x.get(end_basis_index(dim, o, a)).map(|c| (o, c.clone())))
        .collect()
}

/// True iff `g(x(a_1..a_n)) = x(g a_1, …, g a_n)` for every basis element
/// `x ∈ O(n)` and every basis tuple, `n ≤ max_arity`. Both structure maps
/// must be operad morphisms into endomorphism operads of `g`'s source and
/// target.
pub fn check_algebra_morphism(
    op: &OperadTable,
    struct_a: &OperadMorphism,
    struct_b: &OperadMorphism,
    g: &HomogMap,
    max_arity: usize,
) -> Result<bool> {
    for s in [struct_a, struct_b] {
        if **s.source() != *op {
            return Err(Error::Precondition(
                "structure map has the wrong source operad".into(),
            ));
        }
        if !check_operad_morphism(s, max_arity)?.ok {
            return Err(Error::Precondition(
                "structure map is not an operad morphism".into(),
            ));
        }
    }
    let (da, db) = (g.source().dim(), g.target().dim());
    for (s, dim) in [(struct_a, da), (struct_b, db)] {
        if s.target().component(1).dim() != dim * dim {
            return Err(Error::Shape("structure map target does not match g".into()));
        }
    }
    if g.degree() != 0 {
        return Err(Error::Degree("g must have degree 0".into()));
    }
    for n in 0..=max_arity {
        for x in 0..op.component(n).dim() {
            let xa = struct_a.map(n).column(x).cloned().unwrap_or_default();
            let xb = struct_b.map(n).column(x).cloned().unwrap_or_default();
            for t in 0..da.pow(n as u32) {
                let (_, a) = decode_end_index(da, n, t);
                let lhs = g.apply(&eval_end(&xa, da, &a));
                // x(g a_1, …, g a_n), expanded multilinearly.
                let mut partial: Vec<(Vec<usize>, crate::scalar::Scalar)> =
                    vec![(Vec::new(), g.field().one())];
                for &aj in &a {
                    let mut next = Vec::new();
                    if let Some(col) = g.column(aj) {
                        for (t, c) in &partial {
                            for (b, gb) in col.iter() {
                                let mut t2 = t.clone();
                                t2.push(b);
                                next.push((t2, c * gb));
                            }
                        }
                    }
                    partial = next;
                }
                let mut rhs = SparseVec::new();
                for (b, c) in partial {
                    rhs.add_scaled(&eval_end(&xb, db, &b), &c);
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The lift `O → End(g)` through the pull-back, if it exists: each
/// `(struct_a(x), struct_b(x))` must lie in `End(g)(n)`.
pub fn lift_to_end_of_map(
    end_g: &EndOfMap,
    struct_a: &OperadMorphism,
    struct_b: &OperadMorphism,
) -> Result<Option<OperadMorphism>> {
    let op = struct_a.source().clone();
    let bound = struct_a.max_arity().min(end_g.operad.max_arity());
    if struct_b.max_arity() < bound || op.max_arity() != bound {
        return Err(Error::ArityBound(op.max_arity(), bound));
    }
    let mut maps = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let mut map = HomogMap::zero(
            op.component(n).clone(),
            end_g.operad.component(n).clone(),
            0,
        );
        for x in 0..op.component(n).dim() {
            let xa = struct_a.map(n).column(x).cloned().unwrap_or_default();
            let xb = struct_b.map(n).column(x).cloned().unwrap_or_default();
            match end_g.coordinates(n, &xa, &xb) {
                Some(c) => map.set_column(x, c)?,
                None => return Ok(None),
            }
        }
        maps.push(map);
    }
    Ok(Some(OperadMorphism::new(op, end_g.operad.clone(), maps)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedSpace;
    use crate::operad::{build_ass, build_phi, build_uass, end_operad_of_map};
    use crate::scalar::Field;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn diag(field: Field) -> ProductTable {
        let s = Arc::new(GradedSpace::from_pairs(field, [("e1", 0), ("e2", 0)]).unwrap());
        ProductTable::from_fn(
            ChainComplex::with_zero_differential(s),
            |i, j| {
                if i == j {
                    SparseVec::basis(i, field)
                } else {
                    SparseVec::new()
                }
            },
            Some(SparseVec::from_terms([(0, field.one()), (1, field.one())])),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_a_morphism() {
        let f = f2();
        let ass = Arc::new(build_ass(f, 3).unwrap());
        let a = diag(f);
        let s = algebra_structure(&ass, &a).unwrap();
        let g = HomogMap::identity(a.complex().space().clone());
        assert!(check_algebra_morphism(&ass, &s, &s, &g, 3).unwrap());
    }

    #[test]
    fn swap_is_a_morphism_but_projection_drops_unit() {
        let f = f2();
        let a = diag(f);
        let sp = a.complex().space().clone();
        let swap = HomogMap::new(
            sp.clone(),
            sp.clone(),
            0,
            [(0, 1, f.one()), (1, 0, f.one())],
        )
        .unwrap();
        let proj = HomogMap::new(sp.clone(), sp.clone(), 0, [(0, 0, f.one())]).unwrap();
        let ass = Arc::new(build_ass(f, 3).unwrap());
        let uass = Arc::new(build_uass(f, 3).unwrap());
        let sa = algebra_structure(&ass, &a).unwrap();
        let su = algebra_structure(&uass, &a).unwrap();
        assert!(check_algebra_morphism(&ass, &sa, &sa, &swap, 3).unwrap());
        assert!(check_algebra_morphism(&uass, &su, &su, &swap, 3).unwrap());
        // e1 ↦ e1, e2 ↦ 0 is multiplicative but sends the unit to e1.
        assert!(check_algebra_morphism(&ass, &sa, &sa, &proj, 3).unwrap());
        assert!(!check_algebra_morphism(&uass, &su, &su, &proj, 3).unwrap());
    }

    #[test]
    fn lift_agrees_with_elementwise_check() {
        let f = f2();
        let a = diag(f);
        let sp = a.complex().space().clone();
        let ass = Arc::new(build_ass(f, 3).unwrap());
        let sa = algebra_structure(&ass, &a).unwrap();
        for bits in 0u32..16 {
            let entries = (0..4)
                .filter(|k| bits >> k & 1 == 1)
                .map(|k| (k / 2, k % 2, f.one()));
            let g = HomogMap::new(sp.clone(), sp.clone(), 0, entries).unwrap();
            let eg = end_operad_of_map(a.complex(), a.complex(), &g, 3).unwrap();
            let lift = lift_to_end_of_map(&eg, &sa, &sa).unwrap();
            let direct = check_algebra_morphism(&ass, &sa, &sa, &g, 3).unwrap();
            assert_eq!(lift.is_some(), direct, "g bits {bits}");
        }
    }

    #[test]
    fn restriction_along_phi_is_an_ass_structure() {
        let q = Field::Rationals;
        let a = diag(q);
        let phi = build_phi(q, 4).unwrap();
        let su = algebra_structure(phi.target(), &a).unwrap();
        let restricted = compose_morphisms(&phi, &su).unwrap();
        assert!(check_operad_morphism(&restricted, 4).unwrap().ok);
        let direct = algebra_structure(phi.source(), &a).unwrap();
        for n in 0..=4 {
            assert_eq!(restricted.map(n), direct.map(n));
        }
    }

    #[test]
    fn broken_structure_is_rejected() {
        let f = Field::Rationals;
        let s = Arc::new(GradedSpace::from_pairs(f, [("a", 0), ("b", 0)]).unwrap());
        // a·a = b, everything else 0 except b·a = a: not associative.
        let bad = ProductTable::from_fn(
            ChainComplex::with_zero_differential(s.clone()),
            |i, j| match (i, j) {
                (0, 0) => SparseVec::basis(1, f),
                (1, 0) => SparseVec::basis(0, f),
                _ => SparseVec::new(),
            },
            None,
        )
        .unwrap();
        assert!(!bad.is_associative());
        let ass = Arc::new(build_ass(f, 3).unwrap());
        let sb = algebra_structure(&ass, &bad).unwrap();
        let g = HomogMap::identity(s);
        assert!(matches!(
            check_algebra_morphism(&ass, &sb, &sb, &g, 3),
            Err(Error::Precondition(_))
        ));
    }
}
