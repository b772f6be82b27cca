//! The unital associative operad, the associative operad and `φ : Ass → uAss`.

use std::sync::Arc;

use crate::error::Result;
use crate::graded::{GradedSpace, HomogMap, SparseVec};
use crate::scalar::Field;

use super::{OperadBuilder, OperadMorphism, OperadTable};

fn one_dim_operad(field: Field, max_arity: usize, with_nullary: bool) -> Result<OperadTable> {
    let max_arity = max_arity.max(1);
    let components = (0..=max_arity)
        .map(|n| {
            if n == 0 && !with_nullary {
                GradedSpace::zero(field)
            } else {
                GradedSpace::line(field, &format!("m{n}"), 0)
            }
        })
        .collect();
    let mut b = OperadBuilder::new(field, components)?;
    b.declare_all()?;
    for p in 1..=max_arity {
        for q in 0..=max_arity + 1 - p {
            if q == 0 && !with_nullary {
                continue;
            }
            for i in 1..=p {
                b.set_comp((p, i, q), 0, 0, SparseVec::basis(0, field))?;
            }
        }
    }
    b.set_identity(SparseVec::basis(0, field))?;
    Ok(b.finish())
}

/// `uAss(n)` is the ground field in degree 0 for every `n ≥ 0`; every
/// composition is the unit isomorphism.
pub fn build_uass(field: Field, max_arity: usize) -> Result<OperadTable> {
    one_dim_operad(field, max_arity, true)
}

/// As [`build_uass`] but with `Ass(0) = 0`.
pub fn build_ass(field: Field, max_arity: usize) -> Result<OperadTable> {
    one_dim_operad(field, max_arity, false)
}

/// The inclusion `Ass → uAss`, the identity in every positive arity.
pub fn build_phi(field: Field, max_arity: usize) -> Result<OperadMorphism> {
    let ass = Arc::new(build_ass(field, max_arity)?);
    let uass = Arc::new(build_uass(field, max_arity)?);
    let maps = (0..=ass.max_arity())
        .map(|n| {
            let entries = if n == 0 {
                vec![]
            } else {
                vec![(0, 0, field.one())]
            };
            HomogMap::new(
                ass.component(n).clone(),
                uass.component(n).clone(),
                0,
                entries,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    OperadMorphism::new(ass, uass, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_operad_axioms, check_operad_morphism};

    #[test]
    fn dimensions() {
        let f = Field::Rationals;
        assert_eq!(build_uass(f, 4).unwrap().component(0).dim(), 1);
        assert_eq!(build_ass(f, 4).unwrap().component(0).dim(), 0);
        for n in 1..=4 {
            assert_eq!(build_ass(f, 4).unwrap().component(n).dim(), 1);
        }
    }

    #[test]
    fn axioms_hold_to_arity_six() {
        for f in [Field::Rationals, Field::prime(2).unwrap()] {
            assert!(
                check_operad_axioms(&build_uass(f, 6).unwrap(), 6)
                    .unwrap()
                    .ok
            );
            assert!(
                check_operad_axioms(&build_ass(f, 6).unwrap(), 6)
                    .unwrap()
                    .ok
            );
        }
    }

    #[test]
    fn phi_is_identity_and_a_morphism() {
        let phi = build_phi(Field::Rationals, 5).unwrap();
        let m3 = phi.map(3);
        assert_eq!(m3.entry(0, 0), Field::Rationals.one());
        assert_eq!(m3.source().dim(), 1);
        assert!(check_operad_morphism(&phi, 5).unwrap().ok);
    }

    #[test]
    fn negated_composition_violates_associativity() {
        let ass = build_ass(Field::Rationals, 4).unwrap();
        let bad = ass
            .with_comp_scaled((2, 1, 2), &Field::Rationals.from_i64(-1))
            .unwrap();
        let report = check_operad_axioms(&bad, 4).unwrap();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.law == "sequential"));
    }
}
