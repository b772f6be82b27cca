//! Seeded generators for complexes, chain maps, products and assignments.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bm::{Assignment, BmAlgebra, Cdga};
use crate::error::Result;
use crate::graded::{compose_maps, ChainComplex, GradedSpace, HomogMap, SparseVec};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for item `k` of a run seeded with `seed`.
pub fn sub_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(k + 1);
    r
}

fn small(field: Field, rng: &mut impl Rng) -> Scalar {
    field.from_i64(rng.gen_range(-2..=2))
}

/// A random complex of dimension `1..=max_dim` with degrees in `-1..=2`.
/// Entries of `d` are drawn one by one and kept only if `d∘d` stays zero.
pub fn random_complex(
    field: Field,
    max_dim: usize,
    graded: bool,
    rng: &mut impl Rng,
) -> Result<ChainComplex> {
    let dim = rng.gen_range(1..=max_dim);
    let degs: Vec<i64> = (0..dim)
        .map(|_| if graded { rng.gen_range(-1..=2) } else { 0 })
        .collect();
    let space = Arc::new(GradedSpace::from_pairs(
        field,
        degs.iter().enumerate().map(|(k, &d)| (format!("v{k}"), d)),
    )?);
    let mut d = HomogMap::zero(space.clone(), space.clone(), -1);
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for i in 0..dim {
        for o in 0..dim {
            if degs[o] == degs[i] - 1 {
                slots.push((o, i));
            }
        }
    }
    slots.shuffle(rng);
    for (o, i) in slots {
        let c = small(field, rng);
        if c.is_zero() {
            continue;
        }
        let mut trial = d.clone();
        trial.add_entry(o, i, &c)?;
        if compose_maps(&trial, &trial)?.is_zero() {
            d = trial;
        }
    }
    ChainComplex::new(space, d)
}

/// A random degree-0 chain map `X → Y`: a random combination of a basis of
/// the solutions of `d_Y g = g d_X`.
pub fn random_chain_map(
    x: &ChainComplex,
    y: &ChainComplex,
    rng: &mut impl Rng,
) -> Result<HomogMap> {
    let field = x.field();
    let (sx, sy) = (x.space(), y.space());
    let unknowns: Vec<(usize, usize)> = (0..sy.dim())
        .flat_map(|o| (0..sx.dim()).map(move |i| (o, i)))
        .filter(|&(o, i)| sy.deg(o) == sx.deg(i))
        .collect();
    // Rows: entries (o, i) of d_Y g − g d_X, a map X → Y of degree −1.
    let rows = sy.dim() * sx.dim();
    let mut m = Matrix::zeros(field, rows, unknowns.len());
    for (u, &(o, i)) in unknowns.iter().enumerate() {
        // d_Y g: column i of g is e_o, so it contributes d_Y(e_o) at input i.
        if let Some(col) = y.d().column(o) {
            for (o2, c) in col.iter() {
                let r = o2 * sx.dim() + i;
                let v = m.get(r, u) + c;
                m.set(r, u, v);
            }
        }
        // −g d_X: inputs i2 with d_X(e_{i2}) ∋ e_i.
        for (i2, _, c) in x
            .d()
            .entries()
            .filter(|e| e.0 == i)
            .map(|(a, b, c)| (b, a, c))
        {
            let r = o * sx.dim() + i2;
            let v = m.get(r, u) - c;
            m.set(r, u, v);
        }
    }
    let basis = m.nullspace();
    let mut g = HomogMap::zero(sx.clone(), sy.clone(), 0);
    for v in basis {
        let c = small(field, rng);
        if c.is_zero() {
            continue;
        }
        for (u, &(o, i)) in unknowns.iter().enumerate() {
            if !v[u].is_zero() {
                g.add_entry(o, i, &(&v[u] * &c))?;
            }
        }
    }
    Ok(g)
}

/// A random element of the given degree.
pub fn random_element(space: &GradedSpace, deg: i64, rng: &mut impl Rng) -> SparseVec {
    let field = space.field();
    (0..space.dim())
        .filter(|&k| space.deg(k) == deg)
        .filter_map(|k| rng.gen_bool(0.5).then(|| (k, small(field, rng))))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Mixture of valid and invalid assignments into a weight truncation: the
/// zero map, the universal point `x_n ↦ λ^{n−1} x_n`, the universal point
/// with one generator perturbed, the universal point cut off above some
/// arity, or independent random elements.
pub fn random_assignment(b: &BmAlgebra, target: &Cdga, rng: &mut impl Rng) -> Assignment {
    let field = Field::Rationals;
    let space = target.space();
    let r = b.r();
    let lambda = field.from_i64(*[-2i64, -1, 1, 2, 3].choose(rng).expect("nonempty"));
    let universal = crate::bm::universal_assignment(target, &lambda, r);
    match rng.gen_range(0..5) {
        0 => Assignment::new(),
        1 => universal,
        2 => {
            let mut a = universal;
            let n = rng.gen_range(2..=r);
            let e = random_element(space, b.degree(n), rng);
            let cur = a.remove(&n).unwrap_or_default();
            let mut v = cur;
            v.add(&e);
            if !v.is_zero() {
                a.insert(n, v);
            }
            a
        }
        3 => {
            let cut = rng.gen_range(2..=r);
            universal.into_iter().filter(|(n, _)| *n < cut).collect()
        }
        _ => (2..=r)
            .filter_map(|n| {
                let e = random_element(space, b.degree(n), rng);
                (!e.is_zero()).then_some((n, e))
            })
            .collect(),
    }
}
