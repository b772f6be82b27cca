//! Endomorphism operads `End(M)(n) = Hom(M^{⊗n}, M)` and the operad `End(g)`
//! of a chain map, realised as the pull-back of `End(X)` and `End(Y)` over
//! `Hom(X^{⊗n}, Y)`.
//!
//! Basis of `End(M)(n)`: the elementary maps `E(o; a_1..a_n)` sending the
//! basis tensor `a_1 ⊗ … ⊗ a_n` to `o` and every other basis tensor to zero,
//! indexed by `o · dim^n + lex(a)`. Its degree is `|o| − Σ|a_j|`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{
    compose_maps, is_odd, BasisElem, ChainComplex, GradedSpace, HomogMap, SparseVec, TENSOR_SEP,
};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

use super::{OperadBuilder, OperadMorphism, OperadTable};

/// Index of `E(out; tuple)` in `End(M)(tuple.len())` for `dim M = dim`.
pub fn end_basis_index(dim: usize, out: usize, tuple: &[usize]) -> usize {
    let mut idx = out;
    for &a in tuple {
        idx = idx * dim + a;
    }
    idx
}

/// Inverse of [`end_basis_index`].
pub(crate) fn decode_end_index(dim: usize, n: usize, mut idx: usize) -> (usize, Vec<usize>) {
    let mut tuple = vec![0; n];
    for k in (0..n).rev() {
        tuple[k] = idx % dim;
        idx /= dim;
    }
    (idx, tuple)
}

fn tuples(dim: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = dim.checked_pow(n as u32).unwrap_or(0);
    (0..count).map(move |mut k| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = k % dim;
            k /= dim;
        }
        t
    })
}

fn end_component(m: &GradedSpace, n: usize) -> Result<GradedSpace> {
    let dim = m.dim();
    let mut basis = Vec::with_capacity(dim.pow(n as u32 + 1));
    for o in 0..dim {
        for t in tuples(dim, n) {
            let ins = if n == 0 {
                "1".to_string()
            } else {
                t.iter()
                    .map(|&a| m.name(a))
                    .collect::<Vec<_>>()
                    .join(TENSOR_SEP)
            };
            let deg = m.deg(o) - t.iter().map(|&a| m.deg(a)).sum::<i64>();
            basis.push(BasisElem {
                name: format!("{}<-{ins}", m.name(o)),
                deg,
            });
        }
    }
    GradedSpace::new(m.field(), basis)
}

/// The endomorphism operad of a finite-dimensional complex, up to `max_arity`.
///
/// `∘_i` is insertion with the sign `(−1)^{|y| Σ_{j<i}|a_j|}`; the
/// differential is `∂f = d∘f − Σ_i (−1)^{|f| + Σ_{j<i}|a_j|} f∘(1⊗…⊗d⊗…⊗1)`.
pub fn end_operad(m: &ChainComplex, max_arity: usize) -> Result<OperadTable> {
    let space = m.space();
    let field = space.field();
    let dim = space.dim();
    let max = max_arity.max(1);
    let components = (0..=max)
        .map(|n| end_component(space, n))
        .collect::<Result<Vec<_>>>()?;
    let mut b = OperadBuilder::new(field, components)?;
    b.declare_all()?;

    let prefix_deg =
        |t: &[usize], upto: usize| -> i64 { t[..upto].iter().map(|&a| space.deg(a)).sum() };

    for p in 1..=max {
        for q in 0..=max + 1 - p {
            let q_tuples: Vec<Vec<usize>> = tuples(dim, q).collect();
            for i in 1..=p {
                for o in 0..dim {
                    for a in tuples(dim, p) {
                        let x = end_basis_index(dim, o, &a);
                        let o2 = a[i - 1];
                        let shift = prefix_deg(&a, i - 1);
                        for bt in &q_tuples {
                            let y = end_basis_index(dim, o2, bt);
                            let ydeg =
                                space.deg(o2) - bt.iter().map(|&c| space.deg(c)).sum::<i64>();
                            let mut t = Vec::with_capacity(p + q - 1);
                            t.extend_from_slice(&a[..i - 1]);
                            t.extend_from_slice(bt);
                            t.extend_from_slice(&a[i..]);
                            let r = end_basis_index(dim, o, &t);
                            let c = field.sign(is_odd(ydeg) && is_odd(shift));
                            b.set_comp((p, i, q), x, y, SparseVec::from_terms([(r, c)]))?;
                        }
                    }
                }
            }
        }
    }

    b.set_identity(SparseVec::from_terms(
        (0..dim).map(|o| (end_basis_index(dim, o, &[o]), field.one())),
    ))?;

    let pre = m.d_preimages();
    let mut ds = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let comp = b.component(n).clone();
        let mut map = HomogMap::zero(comp.clone(), comp.clone(), -1);
        for o in 0..dim {
            for a in tuples(dim, n) {
                let x = end_basis_index(dim, o, &a);
                let fdeg = comp.deg(x);
                let mut col = SparseVec::new();
                if let Some(dcol) = m.d().column(o) {
                    for (o2, c) in dcol.iter() {
                        col.add_term(end_basis_index(dim, o2, &a), c);
                    }
                }
                for i in 0..n {
                    let odd = is_odd(fdeg + prefix_deg(&a, i));
                    for (src, c) in &pre[a[i]] {
                        let mut t = a.clone();
                        t[i] = *src;
                        col.add_term(end_basis_index(dim, o, &t), &(-c).signed(odd));
                    }
                }
                map.set_column(x, col)?;
            }
        }
        ds.push(map);
    }
    b.set_differential(ds)?;
    Ok(b.finish())
}

/// One homogeneous block of `End(g)(n)`: pairs `(α, β)` of a fixed degree.
#[derive(Clone, Debug)]
struct Block {
    /// Columns: the `End(X)(n)` basis indices of this degree, then `End(Y)(n)`.
    x_cols: Vec<usize>,
    y_cols: Vec<usize>,
    /// Nullspace basis in column coordinates; `free[k]` is the free column of `basis[k]`.
    basis: Vec<Vec<Scalar>>,
    free: Vec<usize>,
    /// Index of `basis[0]` in the component.
    offset: usize,
}

/// `End(g)` together with its projections `d1 : End(g) → End(X)` and
/// `d0 : End(g) → End(Y)`.
#[derive(Clone, Debug)]
pub struct EndOfMap {
    pub operad: Arc<OperadTable>,
    pub end_x: Arc<OperadTable>,
    pub end_y: Arc<OperadTable>,
    pub d1: OperadMorphism,
    pub d0: OperadMorphism,
    blocks: Vec<BTreeMap<i64, Block>>,
}

impl EndOfMap {
    /// Coordinates of the pair `(α, β)` in `End(g)(n)`, or `None` if the pair
    /// does not satisfy `g∘α = β∘g^{⊗n}`.
    pub fn coordinates(&self, n: usize, alpha: &SparseVec, beta: &SparseVec) -> Option<SparseVec> {
        let cx = self.end_x.component(n);
        let cy = self.end_y.component(n);
        let mut by_deg: BTreeMap<i64, (Vec<(usize, Scalar)>, Vec<(usize, Scalar)>)> =
            BTreeMap::new();
        for (k, c) in alpha.iter() {
            by_deg.entry(cx.deg(k)).or_default().0.push((k, c.clone()));
        }
        for (k, c) in beta.iter() {
            by_deg.entry(cy.deg(k)).or_default().1.push((k, c.clone()));
        }
        let field = self.operad.field();
        let mut out = SparseVec::new();
        for (deg, (xs, ys)) in by_deg {
            let block = self.blocks[n].get(&deg)?;
            let width = block.x_cols.len() + block.y_cols.len();
            let mut v = vec![field.zero(); width];
            let x_pos: HashMap<usize, usize> = block
                .x_cols
                .iter()
                .enumerate()
                .map(|(k, &c)| (c, k))
                .collect();
            let y_pos: HashMap<usize, usize> = block
                .y_cols
                .iter()
                .enumerate()
                .map(|(k, &c)| (c, block.x_cols.len() + k))
                .collect();
            for (k, c) in xs {
                v[x_pos[&k]] = c;
            }
            for (k, c) in ys {
                v[y_pos[&k]] = c;
            }
            let mut recon = vec![field.zero(); width];
            for (b, &f) in block.basis.iter().zip(&block.free) {
                let coef = &v[f];
                if coef.is_zero() {
                    continue;
                }
                for (slot, e) in recon.iter_mut().zip(b) {
                    *slot += &(e * coef);
                }
            }
            if recon != v {
                return None;
            }
            for (k, &f) in block.free.iter().enumerate() {
                out.add_term(block.offset + k, &v[f]);
            }
        }
        Some(out)
    }

    /// The pair `(α, β)` represented by a basis element of `End(g)(n)`.
    pub fn pair(&self, n: usize, idx: usize) -> (SparseVec, SparseVec) {
        let block = self.blocks[n]
            .values()
            .find(|b| idx >= b.offset && idx < b.offset + b.basis.len())
            .expect("index within component");
        let vec = &block.basis[idx - block.offset];
        let nx = block.x_cols.len();
        let alpha = block
            .x_cols
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, vec[k].clone()))
            .collect();
        let beta = block
            .y_cols
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, vec[nx + k].clone()))
            .collect();
        (alpha, beta)
    }
}

/// Builds `End(g)` for a degree-0 chain map `g : X → Y`.
pub fn end_operad_of_map(
    x: &ChainComplex,
    y: &ChainComplex,
    g: &HomogMap,
    max_arity: usize,
) -> Result<EndOfMap> {
    if g.degree() != 0 {
        return Err(Error::Degree(format!(
            "g has degree {}, expected 0",
            g.degree()
        )));
    }
    if **g.source() != **x.space() || **g.target() != **y.space() {
        return Err(Error::Shape("g must map X to Y".into()));
    }
    if compose_maps(y.d(), g)? != compose_maps(g, x.d())? {
        return Err(Error::Precondition(
            "g does not commute with the differentials".into(),
        ));
    }
    let field = x.field();
    let max = max_arity.max(1);
    let end_x = Arc::new(end_operad(x, max)?);
    let end_y = Arc::new(end_operad(y, max)?);
    let (dx, dy) = (x.dim(), y.dim());

    // g as per-target preimage lists: pre[b] = [(a, g[b, a])].
    let mut pre = vec![Vec::new(); dy];
    for (b, a, c) in g.entries() {
        pre[b].push((a, c.clone()));
    }

    let mut blocks = Vec::with_capacity(max + 1);
    let mut components = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let cx = end_x.component(n);
        let cy = end_y.component(n);
        let mut cols: BTreeMap<i64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for k in 0..cx.dim() {
            cols.entry(cx.deg(k)).or_default().0.push(k);
        }
        for k in 0..cy.dim() {
            cols.entry(cy.deg(k)).or_default().1.push(k);
        }
        let mut comp_blocks = BTreeMap::new();
        let mut basis_elems = Vec::new();
        for (deg, (x_cols, y_cols)) in cols {
            // Constraint rows: basis of Hom(X^n, Y) in this degree, keyed by (out, tuple index).
            let mut rows: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            let mut entries: Vec<((usize, usize), usize, Scalar)> = Vec::new();
            for (col, &k) in x_cols.iter().enumerate() {
                let (o, a) = decode_end_index(dx, n, k);
                let t = end_basis_index(dx, 0, &a);
                for (yo, c) in g.column(o).into_iter().flat_map(|c| c.iter()) {
                    entries.push(((yo, t), col, c.clone()));
                }
            }
            for (col, &k) in y_cols.iter().enumerate() {
                let (o, b) = decode_end_index(dy, n, k);
                // β∘g^{⊗n} on the X-tuples that g maps onto b.
                let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), field.one())];
                for &bj in &b {
                    let mut next = Vec::new();
                    for (t, c) in &partial {
                        for (a, ga) in &pre[bj] {
                            let mut t2 = t.clone();
                            t2.push(*a);
                            next.push((t2, c * ga));
                        }
                    }
                    partial = next;
                }
                for (a, c) in partial {
                    let t = end_basis_index(dx, 0, &a);
                    entries.push(((o, t), x_cols.len() + col, -c));
                }
            }
            for (key, _, _) in &entries {
                let next = rows.len();
                rows.entry(*key).or_insert(next);
            }
            let width = x_cols.len() + y_cols.len();
            let mut mat = Matrix::zeros(field, rows.len(), width);
            for (key, col, c) in entries {
                let r = rows[&key];
                let v = mat.get(r, col) + &c;
                mat.set(r, col, v);
            }
            let (basis, free) = mat.nullspace_with_free();
            let offset = basis_elems.len();
            for k in 0..basis.len() {
                basis_elems.push(BasisElem {
                    name: format!("g{n}_{}", offset + k),
                    deg,
                });
            }
            comp_blocks.insert(
                deg,
                Block {
                    x_cols,
                    y_cols,
                    basis,
                    free,
                    offset,
                },
            );
        }
        blocks.push(comp_blocks);
        components.push(GradedSpace::new(field, basis_elems)?);
    }

    let mut partial = EndOfMap {
        operad: Arc::new(OperadBuilder::new(field, components.clone())?.finish()),
        end_x: end_x.clone(),
        end_y: end_y.clone(),
        d1: OperadMorphism {
            source: end_x.clone(),
            target: end_x.clone(),
            maps: vec![],
        },
        d0: OperadMorphism {
            source: end_y.clone(),
            target: end_y.clone(),
            maps: vec![],
        },
        blocks,
    };

    let mut b = OperadBuilder::new(field, components)?;
    b.declare_all()?;
    let pairs: Vec<Vec<(SparseVec, SparseVec)>> = (0..=max)
        .map(|n| {
            (0..b.component(n).dim())
                .map(|k| partial.pair(n, k))
                .collect()
        })
        .collect();
    for p in 1..=max {
        for q in 0..=max + 1 - p {
            for i in 1..=p {
                for (u, (au, bu)) in pairs[p].iter().enumerate() {
                    for (w, (aw, bw)) in pairs[q].iter().enumerate() {
                        let a = end_x.compose((p, i, q), au, aw)?;
                        let bb = end_y.compose((p, i, q), bu, bw)?;
                        let coords = partial.coordinates(p + q - 1, &a, &bb).ok_or_else(|| {
                            Error::Invalid("End(g) is not closed under composition".into())
                        })?;
                        b.set_comp((p, i, q), u, w, coords)?;
                    }
                }
            }
        }
    }
    let id = partial
        .coordinates(1, end_x.identity(), end_y.identity())
        .ok_or_else(|| Error::Invalid("identity pair is not in End(g)".into()))?;
    b.set_identity(id)?;
    let mut ds = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let comp = b.component(n).clone();
        let mut map = HomogMap::zero(comp.clone(), comp.clone(), -1);
        let (dxn, dyn_) = (
            end_x.differential(n).expect("End has d"),
            end_y.differential(n).expect("End has d"),
        );
        for (k, (a, bb)) in pairs[n].iter().enumerate() {
            let coords = partial
                .coordinates(n, &dxn.apply(a), &dyn_.apply(bb))
                .ok_or_else(|| Error::Invalid("End(g) is not closed under d".into()))?;
            map.set_column(k, coords)?;
        }
        ds.push(map);
    }
    b.set_differential(ds)?;
    let operad = Arc::new(b.finish());

    let project = |target: &Arc<OperadTable>, first: bool| -> Result<OperadMorphism> {
        let maps = (0..=max)
            .map(|n| {
                let mut map =
                    HomogMap::zero(operad.component(n).clone(), target.component(n).clone(), 0);
                for (k, (a, bb)) in pairs[n].iter().enumerate() {
                    map.set_column(k, if first { a.clone() } else { bb.clone() })?;
                }
                Ok(map)
            })
            .collect::<Result<Vec<_>>>()?;
        OperadMorphism::new(operad.clone(), target.clone(), maps)
    };
    partial.d1 = project(&end_x, true)?;
    partial.d0 = project(&end_y, false)?;
    partial.operad = operad;
    Ok(partial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::check_operad_axioms;
    use crate::scalar::Field;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn index_round_trip() {
        let idx = end_basis_index(3, 2, &[0, 1, 2]);
        assert_eq!(decode_end_index(3, 3, idx), (2, vec![0, 1, 2]));
    }

    #[test]
    fn one_dimensional_end_is_scalar_multiplication() {
        let m = ChainComplex::with_zero_differential(Arc::new(GradedSpace::line(q(), "e", 0)));
        let end = end_operad(&m, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(end.component(n).dim(), 1);
        }
        let one = SparseVec::basis(0, q());
        let two = one.scaled(&q().from_i64(2));
        let three = one.scaled(&q().from_i64(3));
        assert_eq!(
            end.compose((2, 1, 3), &two, &three).unwrap(),
            one.scaled(&q().from_i64(6))
        );
    }

    #[test]
    fn ungraded_dimension_count() {
        let m = ChainComplex::with_zero_differential(Arc::new(
            GradedSpace::from_pairs(q(), [("a", 0), ("b", 0)]).unwrap(),
        ));
        let end = end_operad(&m, 4).unwrap();
        for k in 0..=4 {
            assert_eq!(end.component(k).dim(), 1 << (k + 1));
        }
    }

    #[test]
    fn graded_end_with_differential_satisfies_axioms() {
        let space = Arc::new(GradedSpace::from_pairs(q(), [("u", 1), ("v", 0), ("w", 2)]).unwrap());
        let d = HomogMap::new(space.clone(), space.clone(), -1, [(1, 0, q().from_i64(3))]).unwrap();
        let m = ChainComplex::new(space, d).unwrap();
        let end = end_operad(&m, 3).unwrap();
        let report = check_operad_axioms(&end, 3).unwrap();
        assert!(report.ok, "{:?}", report.violations.first());
    }

    #[test]
    fn identity_map_pullback_is_end() {
        let space = Arc::new(GradedSpace::from_pairs(q(), [("a", 0), ("b", 1)]).unwrap());
        let x = ChainComplex::with_zero_differential(space.clone());
        let g = HomogMap::identity(space);
        let e = end_operad_of_map(&x, &x, &g, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(e.operad.component(n).dim(), e.end_x.component(n).dim());
            assert_eq!(e.d1.map(n).columns().count(), e.operad.component(n).dim());
        }
        assert!(check_operad_axioms(&e.operad, 3).unwrap().ok);
    }

    #[test]
    fn scalar_map_pullback_is_one_dimensional() {
        let space = Arc::new(GradedSpace::line(q(), "e", 0));
        let x = ChainComplex::with_zero_differential(space.clone());
        let g = HomogMap::new(space.clone(), space, 0, [(0, 0, q().from_i64(2))]).unwrap();
        let e = end_operad_of_map(&x, &x, &g, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(e.operad.component(n).dim(), 1);
            // λα = λ^n β with λ = 2.
            let (a, b) = e.pair(n, 0);
            let lhs = a.scaled(&q().from_i64(2));
            let rhs = b.scaled(&q().from_i64(1 << n));
            assert_eq!(lhs.get(0), rhs.get(0));
        }
    }

    #[test]
    fn zero_map_pullback_dimensions() {
        let sx = Arc::new(GradedSpace::from_pairs(q(), [("a", 0), ("b", 0)]).unwrap());
        let sy = Arc::new(GradedSpace::line(q(), "c", 0));
        let x = ChainComplex::with_zero_differential(sx.clone());
        let y = ChainComplex::with_zero_differential(sy.clone());
        let g = HomogMap::zero(sx, sy, 0);
        let e = end_operad_of_map(&x, &y, &g, 3).unwrap();
        // arity 0 forces β = 0; positive arities are unconstrained.
        assert_eq!(e.operad.component(0).dim(), 2);
        for n in 1..=3 {
            assert_eq!(e.operad.component(n).dim(), (1 << (n + 1)) + 1);
        }
    }

    #[test]
    fn rejects_non_chain_map() {
        let s = Arc::new(GradedSpace::from_pairs(q(), [("a", 1), ("b", 0)]).unwrap());
        let d = HomogMap::new(s.clone(), s.clone(), -1, [(1, 0, q().one())]).unwrap();
        let x = ChainComplex::new(s.clone(), d).unwrap();
        let y = ChainComplex::with_zero_differential(s.clone());
        let g = HomogMap::identity(s);
        assert!(matches!(
            end_operad_of_map(&x, &y, &g, 2),
            Err(Error::Precondition(_))
        ));
    }
}
