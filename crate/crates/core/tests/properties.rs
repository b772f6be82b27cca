use std::sync::Arc;

use proptest::prelude::*;

use operadic::ainf::build_ainf;
use operadic::bm::{build_bm, gen_degree, GCPoly};
use operadic::free::{graft, GenSet, PlanarTree, TreePoly};
use operadic::graded::{compose_maps, koszul_odd, koszul_sign, GradedSpace, HomogMap};
use operadic::moduli::{enumerate_points, general_linear_group, DEFAULT_BUDGET};
use operadic::oracle;
use operadic::random::{random_chain_map, random_complex, sub_rng};
use operadic::scalar::Field;

fn q() -> Field {
    Field::Rationals
}

fn gens() -> GenSet {
    GenSet::new([
        ("m2", 2, 0),
        ("m3", 3, 1),
        ("a", 2, 1),
        ("b", 2, -1),
        ("c", 1, 1),
        ("t", 3, 2),
    ])
    .unwrap()
}

const NAMES: [&str; 6] = ["m2", "m3", "a", "b", "c", "t"];

/// Grows a tree by grafting corollas at chosen leaves, keeping arity ≤ `max`.
fn grow(g: &GenSet, names: &[&str], steps: &[(usize, usize)], max: usize) -> PlanarTree {
    let mut t = g.corolla(names[steps[0].0 % names.len()]).unwrap();
    for &(k, pos) in &steps[1..] {
        let c = g.corolla(names[k % names.len()]).unwrap();
        if t.arity() + c.arity() - 1 > max {
            continue;
        }
        let i = pos % t.arity() + 1;
        t = t.graft(i, &c).unwrap().0;
    }
    t
}

fn steps() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0usize..16, 0usize..16), 1..4)
}

fn poly(g: &GenSet, s: &[(usize, usize)]) -> TreePoly {
    TreePoly::from_tree(q(), grow(g, &NAMES, s, 4))
}

fn sign(odd: bool) -> operadic::scalar::Scalar {
    q().sign(odd)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequential_grafting_is_associative(x in steps(), y in steps(), z in steps(), i in 0usize..8, j in 0usize..8) {
        let g = gens();
        let (x, y, z) = (poly(&g, &x), poly(&g, &y), poly(&g, &z));
        let i = i % x.arity() + 1;
        let j = j % y.arity() + 1;
        let lhs = graft(&graft(&x, i, &y).unwrap(), i + j - 1, &z).unwrap();
        let rhs = graft(&x, i, &graft(&y, j, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parallel_grafting_commutes_up_to_koszul_sign(x in steps(), y in steps(), z in steps(), i in 0usize..8, j in 0usize..8) {
        let g = gens();
        let (x, y, z) = (poly(&g, &x), poly(&g, &y), poly(&g, &z));
        prop_assume!(x.arity() >= 2);
        let (mut i, mut j) = (i % x.arity() + 1, j % x.arity() + 1);
        prop_assume!(i != j);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let lhs = graft(&graft(&x, i, &y).unwrap(), j + y.arity() - 1, &z).unwrap();
        let rhs = graft(&graft(&x, j, &z).unwrap(), i, &y).unwrap();
        prop_assert_eq!(lhs, rhs.scaled(&sign(koszul_odd(y.degree(), z.degree()))));
    }

    #[test]
    fn ainf_differential_is_a_derivation(xs in steps(), ys in steps(), i in 0usize..8) {
        let op = build_ainf(7).unwrap();
        let names: Vec<String> = (2..=4).map(operadic::ainf::mu_name).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let x = TreePoly::from_tree(q(), grow(op.gens(), &names, &xs, 4));
        let y = TreePoly::from_tree(q(), grow(op.gens(), &names, &ys, 4));
        let i = i % x.arity() + 1;
        let d = op.derivation();
        let lhs = d.apply(&graft(&x, i, &y).unwrap());
        let mut rhs = graft(&d.apply(&x), i, &y).unwrap();
        rhs.add_scaled(&graft(&x, i, &d.apply(&y)).unwrap(), &sign(x.degree().rem_euclid(2) == 1)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ainf_differential_squares_to_zero_on_trees(xs in steps()) {
        let op = build_ainf(7).unwrap();
        let names: Vec<String> = (2..=5).map(operadic::ainf::mu_name).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let x = TreePoly::from_tree(q(), grow(op.gens(), &names, &xs, 7));
        let d = op.derivation();
        prop_assert!(d.apply(&d.apply(&x)).is_zero());
    }

    #[test]
    fn trees_round_trip_through_text_and_json(xs in steps()) {
        let g = gens();
        let t = grow(&g, &NAMES, &xs, 6);
        prop_assert_eq!(&PlanarTree::parse(&g, &t.to_sexpr()).unwrap(), &t);
        let p = TreePoly::from_tree(q(), t.clone()).scaled(&q().from_i64(-3));
        let back = TreePoly::from_json(&g, q(), p.arity(), p.degree(), &p.to_json()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn koszul_sign_is_the_pairwise_product(a in prop::collection::vec(-4i64..5, 0..5), b in prop::collection::vec(-4i64..5, 0..5)) {
        let parity: i64 = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).sum::<i64>().rem_euclid(2);
        prop_assert_eq!(koszul_sign(&a, &b), if parity == 0 { 1 } else { -1 });
        prop_assert_eq!(koszul_sign(&a, &b), koszul_sign(&b, &a));
    }

    #[test]
    fn sparse_composition_matches_dense(seed in 0u64..10_000) {
        let mut rng = sub_rng(seed, 0);
        let x = random_complex(q(), 3, true, &mut rng).unwrap();
        let y = random_complex(q(), 3, true, &mut rng).unwrap();
        let z = random_complex(q(), 3, true, &mut rng).unwrap();
        let f = random_chain_map(&x, &y, &mut rng).unwrap();
        let g = random_chain_map(&y, &z, &mut rng).unwrap();
        let gf = compose_maps(&g, &f).unwrap();
        let dense = oracle::dense_mul(q(), &oracle::dense_of(&g), &oracle::dense_of(&f), y.dim());
        prop_assert_eq!(oracle::dense_of(&gf), dense);
        prop_assert!(compose_maps(x.d(), x.d()).unwrap().is_zero());
        // Chain maps commute with d.
        prop_assert_eq!(compose_maps(y.d(), &f).unwrap(), compose_maps(&f, x.d()).unwrap());
    }

    #[test]
    fn graded_commutativity_and_leibniz(m in -3i64..4, u in prop::collection::vec(2usize..7, 1..3), v in prop::collection::vec(2usize..7, 1..3)) {
        let b = build_bm(m, 6).unwrap();
        let one = q().one();
        let (x, y) = (GCPoly::word(m, &u, &one), GCPoly::word(m, &v, &one));
        let (dx, dy): (i64, i64) = (u.iter().map(|&n| gen_degree(m, n)).sum(), v.iter().map(|&n| gen_degree(m, n)).sum());
        prop_assert_eq!(x.mul(&y), {
            let mut s = GCPoly::zero(m);
            s.add_scaled(&y.mul(&x), &sign(koszul_odd(dx, dy)));
            s
        });
        let lhs = b.d(&x.mul(&y));
        let mut rhs = b.d(&x).mul(&y);
        rhs.add_scaled(&x.mul(&b.d(&y)), &sign(dx.rem_euclid(2) == 1));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn gl_action_preserves_associativity_and_is_invertible() {
    let points = enumerate_points(2, 3, false, DEFAULT_BUDGET).unwrap();
    let group = general_linear_group(2, 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(group.len(), 48);
    for p in points.iter().step_by(7) {
        for (g, h) in group.iter().step_by(5) {
            let moved = p.c.act(g, h);
            assert!(moved.is_associative());
            assert_eq!(moved.act(h, g), p.c);
            assert_eq!(moved.find_unit().is_some(), p.unit.is_some());
        }
    }
}

#[test]
fn end_of_map_dimensions_match_dense_solver() {
    for seed in 100..130 {
        let mut rng = sub_rng(seed, 0);
        let f = if seed % 2 == 0 {
            Field::Rationals
        } else {
            Field::prime(5).unwrap()
        };
        let x = random_complex(f, 3, true, &mut rng).unwrap();
        let y = random_complex(f, 2, true, &mut rng).unwrap();
        let g = random_chain_map(&x, &y, &mut rng).unwrap();
        let e = operadic::operad::end_operad_of_map(&x, &y, &g, 3).unwrap();
        for n in 0..=3 {
            assert_eq!(
                e.operad.component(n).dim(),
                oracle::end_of_map_dim(&x, &y, &g, n),
                "seed {seed} arity {n}"
            );
        }
    }
}

#[test]
fn zero_map_pullback_is_the_product() {
    let f = Field::Rationals;
    let s = Arc::new(GradedSpace::from_pairs(f, [("u", 0), ("v", 1)]).unwrap());
    let x = operadic::graded::ChainComplex::with_zero_differential(s.clone());
    let g = HomogMap::zero(s.clone(), s.clone(), 0);
    let e = operadic::operad::end_operad_of_map(&x, &x, &g, 2).unwrap();
    for n in 0..=2 {
        assert_eq!(
            e.operad.component(n).dim(),
            oracle::end_of_map_dim(&x, &x, &g, n)
        );
    }
}
