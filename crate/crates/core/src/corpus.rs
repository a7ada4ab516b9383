//! Bundled example systems with known solution shapes.
//!
//! Every instance fits the desk-scale envelope: at most three variables,
//! term tuples bounded by degree four, at most six terms per polynomial,
//! and a coefficient field among F2, F3, F5. Variable counts per field are
//! chosen so the full density schedule (places of degree <= 3, precisions
//! <= 2) keeps the residue enumeration under its cap: the exponent period
//! at the finest level is 42 over F2, 312 over F3, and 3720 over F5.
//!
//! Instances are also chosen so that the congruence sets stabilize within
//! that fixed schedule. An exponent condition with imprimitive content,
//! such as 2E = 2 from X^2 = T^2, keeps a torsion residue (E = 1 + N/2
//! modulo the period N when N is even) alive at every level the schedule
//! reaches; such residues die only at levels with deeper p-power content,
//! so instances built from them are deliberately excluded.

use crate::ffpoly::{Field, MultiPoly};
use crate::lifting::SolutionFamily;
use crate::Result;

/// Expected shape of a solution family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Empty,
    /// Exactly one exponent vector.
    Unique,
    /// Finitely many exponent vectors, more than one.
    Finite { points: usize },
    /// At least one coset with free directions.
    PositiveDimensional { max_rank: usize },
}

/// A named system with its expected solution shape.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: &'static str,
    pub field: Field,
    pub polys: Vec<MultiPoly>,
    pub kind: SolutionKind,
}

impl CorpusInstance {
    pub fn num_vars(&self) -> usize {
        self.polys.first().map(|f| f.num_vars()).unwrap_or(0)
    }
}

/// Does a computed family match the declared shape?
pub fn family_matches(kind: SolutionKind, family: &SolutionFamily) -> bool {
    match kind {
        SolutionKind::Empty => family.cosets.is_empty(),
        SolutionKind::Unique => {
            family.cosets.len() == 1 && family.cosets[0].basis.is_empty()
        }
        SolutionKind::Finite { points } => {
            family.cosets.len() == points
                && points > 1
                && family.cosets.iter().all(|c| c.basis.is_empty())
        }
        SolutionKind::PositiveDimensional { max_rank } => {
            !family.cosets.is_empty()
                && family.cosets.iter().map(|c| c.basis.len()).max() == Some(max_rank)
                && max_rank >= 1
        }
    }
}

fn poly(field: &Field, num_vars: usize, terms: &[(i64, &[u32])]) -> Result<MultiPoly> {
    let list: Vec<(i64, Vec<u32>)> =
        terms.iter().map(|&(c, t)| (c, t.to_vec())).collect();
    MultiPoly::from_int_terms(field, num_vars, &list)
}

/// The bundled instances, in a fixed order.
pub fn corpus() -> Result<Vec<CorpusInstance>> {
    let f2 = Field::prime(2)?;
    let f3 = Field::prime(3)?;
    let f5 = Field::prime(5)?;
    Ok(vec![
        CorpusInstance {
            name: "product-surface-f2",
            field: f2.clone(),
            // X1*X2 = T: the exponent line E1 + E2 = 1.
            polys: vec![poly(&f2, 2, &[(1, &[0, 1, 1]), (-1, &[1, 0, 0])])?],
            kind: SolutionKind::PositiveDimensional { max_rank: 1 },
        },
        CorpusInstance {
            name: "empty-sum-f2",
            field: f2.clone(),
            // X1 + X2 + 1: three odd coefficients can never cancel.
            polys: vec![poly(&f2, 2, &[(1, &[0, 1, 0]), (1, &[0, 0, 1]), (1, &[0, 0, 0])])?],
            kind: SolutionKind::Empty,
        },
        CorpusInstance {
            name: "linear-point-f2",
            field: f2.clone(),
            // X1 = T.
            polys: vec![poly(&f2, 1, &[(1, &[0, 1]), (-1, &[1, 0])])?],
            kind: SolutionKind::Unique,
        },
        CorpusInstance {
            name: "diagonal-lattice-f2",
            field: f2.clone(),
            // X1 = X2: the diagonal.
            polys: vec![poly(&f2, 2, &[(1, &[0, 1, 0]), (-1, &[0, 0, 1])])?],
            kind: SolutionKind::PositiveDimensional { max_rank: 1 },
        },
        CorpusInstance {
            name: "product-chain-f2",
            field: f2.clone(),
            // X1*X2 = T*X3 and X3 = T: a line in three variables.
            polys: vec![
                poly(&f2, 3, &[(1, &[0, 1, 1, 0]), (-1, &[1, 0, 0, 1])])?,
                poly(&f2, 3, &[(1, &[0, 0, 0, 1]), (-1, &[1, 0, 0, 0])])?,
            ],
            kind: SolutionKind::PositiveDimensional { max_rank: 1 },
        },
        CorpusInstance {
            name: "two-term-points-f3",
            field: f3.clone(),
            // X1 + X2 = T + T^2: exactly (1,2) and (2,1).
            polys: vec![poly(
                &f3,
                2,
                &[(1, &[0, 1, 0]), (1, &[0, 0, 1]), (-1, &[1, 0, 0]), (-1, &[2, 0, 0])],
            )?],
            kind: SolutionKind::Finite { points: 2 },
        },
        CorpusInstance {
            name: "paired-tail-f3",
            field: f3.clone(),
            // (1 + T)(X1 - T^3) expanded: the point E = 3, with terms
            // spread over two residue classes.
            polys: vec![poly(
                &f3,
                1,
                &[(1, &[0, 1]), (1, &[1, 1]), (-1, &[3, 0]), (-1, &[4, 0])],
            )?],
            kind: SolutionKind::Unique,
        },
        CorpusInstance {
            name: "empty-shift-f3",
            field: f3.clone(),
            // X1 - X2 - 1: no zero-sum grouping covers all three terms.
            polys: vec![poly(
                &f3,
                2,
                &[(1, &[0, 1, 0]), (-1, &[0, 0, 1]), (-1, &[0, 0, 0])],
            )?],
            kind: SolutionKind::Empty,
        },
        CorpusInstance {
            name: "product-surface-f3",
            field: f3.clone(),
            polys: vec![poly(&f3, 2, &[(1, &[0, 1, 1]), (-1, &[1, 0, 0])])?],
            kind: SolutionKind::PositiveDimensional { max_rank: 1 },
        },
        CorpusInstance {
            name: "cross-terms-f3",
            field: f3.clone(),
            // X1*X2 = T^3 and X2 = T: the single point (2,1), cut out by a
            // unimodular pair of exponent conditions.
            polys: vec![
                poly(&f3, 2, &[(1, &[0, 1, 1]), (-1, &[3, 0, 0])])?,
                poly(&f3, 2, &[(1, &[0, 0, 1]), (-1, &[1, 0, 0])])?,
            ],
            kind: SolutionKind::Unique,
        },
        CorpusInstance {
            name: "linear-point-f5",
            field: f5.clone(),
            // X1 = T^4: the point E = 4.
            polys: vec![poly(&f5, 1, &[(1, &[0, 1]), (-1, &[4, 0])])?],
            kind: SolutionKind::Unique,
        },
        CorpusInstance {
            name: "empty-doubling-f5",
            field: f5.clone(),
            // 2*X1 + 1: no subset of {2, 1} sums to zero mod 5.
            polys: vec![poly(&f5, 1, &[(2, &[0, 1]), (1, &[0, 0])])?],
            kind: SolutionKind::Empty,
        },
        CorpusInstance {
            name: "paired-tail-f5",
            field: f5.clone(),
            // (1 + 2T)(X1 - T^2) expanded: the point E = 2, reached through
            // two residue classes of terms.
            polys: vec![poly(
                &f5,
                1,
                &[(1, &[0, 1]), (2, &[1, 1]), (-1, &[2, 0]), (-2, &[3, 0])],
            )?],
            kind: SolutionKind::Unique,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::solve_all_monomial_points;

    #[test]
    fn corpus_is_large_and_well_formed() {
        let all = corpus().unwrap();
        assert!(all.len() >= 10);
        let mut names: Vec<&str> = all.iter().map(|i| i.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), all.len(), "names must be unique");
        for inst in &all {
            assert!(!inst.polys.is_empty());
            for f in &inst.polys {
                assert!(f.num_terms() <= 6);
                assert!(f.max_degree() <= 4);
            }
            assert!(inst.num_vars() >= 1 && inst.num_vars() <= 3);
        }
    }

    #[test]
    fn corpus_spans_fields_and_shapes() {
        let all = corpus().unwrap();
        for q in [2u32, 3, 5] {
            assert!(all.iter().any(|i| i.field.order() == q), "field F{q} missing");
        }
        assert!(all.iter().any(|i| i.kind == SolutionKind::Empty));
        assert!(all.iter().any(|i| i.kind == SolutionKind::Unique));
        assert!(all.iter().any(|i| matches!(i.kind, SolutionKind::Finite { .. })));
        assert!(all
            .iter()
            .any(|i| matches!(i.kind, SolutionKind::PositiveDimensional { .. })));
    }

    #[test]
    fn solver_confirms_declared_shapes() {
        for inst in corpus().unwrap() {
            let family = solve_all_monomial_points(&inst.polys).unwrap();
            assert!(
                family_matches(inst.kind, &family),
                "{}: declared {:?}, got {:?}",
                inst.name,
                inst.kind,
                family
            );
        }
    }

    #[test]
    fn variable_counts_fit_density_caps() {
        // Keeps period^M at the finest schedule level under the residue
        // enumeration cap: periods are 42 (F2), 312 (F3), 3720 (F5).
        for inst in corpus().unwrap() {
            let max_vars = match inst.field.order() {
                2 => 3,
                3 => 2,
                5 => 1,
                other => panic!("unexpected field order {other}"),
            };
            assert!(
                inst.num_vars() <= max_vars,
                "{}: {} variables over F{}",
                inst.name,
                inst.num_vars(),
                inst.field.order()
            );
        }
    }
}
