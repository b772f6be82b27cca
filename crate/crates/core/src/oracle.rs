//! Dense brute-force reference implementations. Nothing here calls the
//! sparse or block-structured code paths it is meant to cross-check.

use crate::graded::{ChainComplex, HomogMap};
use crate::operad::ProductTable;
use crate::scalar::{Field, Scalar};

pub type Dense = Vec<Vec<Scalar>>;

pub fn dense_of(map: &HomogMap) -> Dense {
    let field = map.field();
    let mut m = vec![vec![field.zero(); map.source().dim()]; map.target().dim()];
    for (o, i, c) in map.entries() {
        m[o][i] = c.clone();
    }
    m
}

pub fn dense_mul(field: Field, a: &Dense, b: &Dense, inner: usize) -> Dense {
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![field.zero(); cols]; a.len()];
    for (r, row) in a.iter().enumerate() {
        for k in 0..inner {
            if row[k].is_zero() {
                continue;
            }
            for c in 0..cols {
                let t = &row[k] * &b[k][c];
                out[r][c] += &t;
            }
        }
    }
    out
}

/// Rank by plain row reduction.
pub fn dense_rank(mut rows: Dense) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv().expect("nonzero pivot");
        let pivot: Vec<Scalar> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for k in c..cols {
                    let t = &pivot[k] * &f;
                    rows[r][k] = &rows[r][k] - &t;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// `g^{⊗n}` as a dense `dim Y^n × dim X^n` matrix, tuples in lexicographic
/// order. `g` has degree 0, so no Koszul signs appear.
pub fn dense_tensor_power(field: Field, g: &Dense, dx: usize, dy: usize, n: usize) -> Dense {
    let mut out = vec![vec![field.one()]];
    for _ in 0..n {
        let rows = out.len() * dy;
        let cols = out[0].len() * dx;
        let mut next = vec![vec![field.zero(); cols]; rows];
        for (r1, row) in out.iter().enumerate() {
            for (c1, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..dy {
                    for c2 in 0..dx {
                        next[r1 * dy + r2][c1 * dx + c2] = a * &g[r2][c2];
                    }
                }
            }
        }
        out = next;
    }
    out
}

/// `dim End(g)(n)` for a chain map `g: X → Y`, from the single dense system
/// `g∘α = β∘g^{⊗n}` in the unknowns `(α, β) ∈ Hom(X^n, X) × Hom(Y^n, Y)`.
pub fn end_of_map_dim(x: &ChainComplex, y: &ChainComplex, g: &HomogMap, n: usize) -> usize {
    let field = x.field();
    let (dx, dy) = (x.dim(), y.dim());
    let gd = dense_of(g);
    let gn = dense_tensor_power(field, &gd, dx, dy, n);
    let xn = dx.pow(n as u32);
    let yn = dy.pow(n as u32);
    let na = dx * xn;
    let nb = dy * yn;
    // Row (o, t) for o < dy, t < xn. α unknown (a, t) at a*xn + t; β unknown (o, s) at na + o*yn + s.
    let mut rows = vec![vec![field.zero(); na + nb]; dy * xn];
    for o in 0..dy {
        for t in 0..xn {
            let row = &mut rows[o * xn + t];
            for a in 0..dx {
                row[a * xn + t] = gd[o][a].clone();
            }
            for s in 0..yn {
                row[na + o * yn + s] = -&gn[s][t];
            }
        }
    }
    na + nb - dense_rank(rows)
}

/// `g(e_i e_j) = g(e_i) g(e_j)` for all basis pairs, and `g(1) = 1` when
/// `unital`, computed with dense products.
pub fn is_algebra_map(a: &ProductTable, b: &ProductTable, g: &HomogMap, unital: bool) -> bool {
    let field = g.field();
    let gd = dense_of(g);
    let (da, db) = (g.source().dim(), g.target().dim());
    let prod_a = dense_products(a);
    let prod_b = dense_products(b);
    let apply = |v: &[Scalar]| -> Vec<Scalar> {
        (0..db)
            .map(|o| {
                let mut s = field.zero();
                for (k, x) in v.iter().enumerate() {
                    s += &(&gd[o][k] * x);
                }
                s
            })
            .collect()
    };
    for i in 0..da {
        for j in 0..da {
            let lhs = apply(&prod_a[i][j]);
            let mut rhs = vec![field.zero(); db];
            for p in 0..db {
                for q in 0..db {
                    let c = &gd[p][i] * &gd[q][j];
                    if c.is_zero() {
                        continue;
                    }
                    for k in 0..db {
                        rhs[k] += &(&c * &prod_b[p][q][k]);
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    if unital {
        let dense_unit = |t: &ProductTable, d: usize| -> Vec<Scalar> {
            let mut u = vec![field.zero(); d];
            if let Some(v) = t.unit() {
                for (k, c) in v.iter() {
                    u[k] = c.clone();
                }
            }
            u
        };
        if apply(&dense_unit(a, da)) != dense_unit(b, db) {
            return false;
        }
    }
    true
}

fn dense_products(t: &ProductTable) -> Vec<Vec<Vec<Scalar>>> {
    let d = t.complex().dim();
    let field = t.complex().field();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut v = vec![field.zero(); d];
                    for (k, c) in t.product(i, j).iter() {
                        v[k] = c.clone();
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Every linear map `F_2^da → F_2^db` in degree 0, as dense matrices.
pub fn all_f2_maps(da: usize, db: usize) -> Vec<Dense> {
    let f = Field::Prime(2);
    let bits = da * db;
    (0..1u64 << bits)
        .map(|mask| {
            (0..db)
                .map(|o| {
                    (0..da)
                        .map(|i| f.from_i64(((mask >> (o * da + i)) & 1) as i64))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Raw point counts of associative and of unital associative structure
/// constants on `F_q^n`, by looping over every tensor and every candidate unit.
pub fn brute_force_counts(n: usize, q: u64) -> (u64, u64) {
    let n3 = n * n * n;
    let total = q.pow(n3 as u32);
    let mut assoc = 0;
    let mut unital = 0;
    let mut c = vec![0u64; n3];
    let mul = |c: &[u64], x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                let xy = x[i] * y[j] % q;
                if xy == 0 {
                    continue;
                }
                for k in 0..n {
                    out[k] = (out[k] + xy * c[(i * n + j) * n + k]) % q;
                }
            }
        }
        out
    };
    let basis: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|k| u64::from(k == i)).collect())
        .collect();
    let units: Vec<Vec<u64>> = (0..q.pow(n as u32))
        .map(|mut v| {
            (0..n)
                .map(|_| {
                    let d = v % q;
                    v /= q;
                    d
                })
                .collect()
        })
        .collect();
    for mut idx in 0..total {
        for x in c.iter_mut() {
            *x = idx % q;
            idx /= q;
        }
        let ok = basis.iter().all(|a| {
            basis.iter().all(|b| {
                basis
                    .iter()
                    .all(|e| mul(&c, &mul(&c, a, b), e) == mul(&c, a, &mul(&c, b, e)))
            })
        });
        if !ok {
            continue;
        }
        assoc += 1;
        if units.iter().any(|u| {
            basis
                .iter()
                .all(|e| mul(&c, u, e) == *e && mul(&c, e, u) == *e)
        }) {
            unital += 1;
        }
    }
    (assoc, unital)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let f = Field::Rationals;
        let m = vec![
            vec![f.from_i64(1), f.from_i64(2)],
            vec![f.from_i64(2), f.from_i64(4)],
        ];
        assert_eq!(dense_rank(m), 1);
        assert_eq!(dense_rank(vec![vec![f.zero(); 3]; 2]), 0);
    }

    #[test]
    fn brute_counts_in_dimension_one() {
        assert_eq!(brute_force_counts(1, 3), (3, 2));
        assert_eq!(brute_force_counts(1, 5), (5, 4));
    }

    #[test]
    fn f2_map_count() {
        assert_eq!(all_f2_maps(2, 2).len(), 16);
    }
}
