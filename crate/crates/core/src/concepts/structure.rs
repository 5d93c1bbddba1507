//! Structural constructions on formulas: the decision-list disagreement
//! decomposition, greedy maximal variable-disjoint clause sets, and
//! restriction under a partial assignment.

use serde::Serialize;

use super::{Clause, CnfFormula, Concept, DecisionList, Literal, PartialAssignment};
use crate::error::{check_dim, Error, Result};

/// `φ_{i,j} = ¬K_1 ∧ … ∧ ¬K_{i-1} ∧ K_i ∧ ¬K'_1 ∧ … ∧ ¬K'_{j-1} ∧ K'_j`
/// for one pair of items with differing outputs. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisagreementCnf {
    pub i: usize,
    pub j: usize,
    pub formula: CnfFormula,
}

fn activation_clauses(dl: &DecisionList, index: usize, out: &mut Vec<Clause>) {
    for item in &dl.items()[..index] {
        out.push(item.term.negation());
    }
    for &lit in dl.items()[index].term.literals() {
        out.push(Clause::unit(lit));
    }
}

/// One k-CNF per pair `(i, j)` with `v_i ≠ v'_j`, including pairs whose
/// formula is unsatisfiable. Their satisfying sets partition
/// `{x : c(x) ≠ h(x)}`.
pub fn disagreement_cnfs(c: &DecisionList, h: &DecisionList) -> Result<Vec<DisagreementCnf>> {
    check_dim(c.n, h.n)?;
    let k = c.width().max(h.width());
    let mut out = Vec::new();
    for (i, ci) in c.items().iter().enumerate() {
        for (j, hj) in h.items().iter().enumerate() {
            if ci.output == hj.output {
                continue;
            }
            let mut clauses = Vec::with_capacity(i + j + 2 * k);
            activation_clauses(c, i, &mut clauses);
            activation_clauses(h, j, &mut clauses);
            out.push(DisagreementCnf {
                i,
                j,
                formula: CnfFormula::with_width(c.n, k.max(1), clauses)?,
            });
        }
    }
    Ok(out)
}

/// A maximal set `𝓜` of pairwise variable-disjoint clauses and its variables
/// `I_𝓜`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointClauses {
    /// Indices into the formula's clause list, in clause order.
    pub clauses: Vec<usize>,
    /// Sorted variable indices covered by the selected clauses.
    pub vars: Vec<usize>,
}

impl DisjointClauses {
    pub fn size(&self) -> usize {
        self.clauses.len()
    }
}

/// Greedy first-fit in clause order: a clause is taken iff it shares no
/// variable with the clauses already taken.
pub fn maximal_disjoint_clauses(phi: &CnfFormula) -> DisjointClauses {
    let mut used = 0u64;
    let mut clauses = Vec::new();
    for (idx, c) in phi.clauses().iter().enumerate() {
        let m = c.var_mask();
        if m & used == 0 {
            used |= m;
            clauses.push(idx);
        }
    }
    let vars = (0..phi.dim()).filter(|&v| (used >> v) & 1 == 1).collect();
    DisjointClauses { clauses, vars }
}

/// `φ'_a = φ|_a ∧ ⋀_{i ∈ dom a} l_i`. Satisfied clauses are dropped and
/// falsified literals removed; a fully falsified clause collapses the result
/// to the constant-false formula.
pub fn restrict(phi: &CnfFormula, a: &PartialAssignment) -> Result<CnfFormula> {
    let n = phi.dim();
    let mut bound_mask = 0u64;
    let mut values = 0u64;
    for (v, b) in a.iter() {
        if v >= n {
            return Err(Error::invalid(format!(
                "assignment binds variable {} outside dimension {n}",
                v + 1
            )));
        }
        bound_mask |= 1u64 << v;
        if b {
            values |= 1u64 << v;
        }
    }

    let mut clauses = Vec::with_capacity(phi.clauses().len() + a.len());
    for c in phi.clauses() {
        let satisfied = c
            .literals()
            .iter()
            .any(|l| (bound_mask >> l.var) & 1 == 1 && l.satisfied_by(values));
        if satisfied {
            continue;
        }
        let rest: Vec<Literal> = c
            .literals()
            .iter()
            .copied()
            .filter(|l| (bound_mask >> l.var) & 1 == 0)
            .collect();
        if rest.is_empty() {
            return CnfFormula::falsum(n);
        }
        clauses.push(Clause::new(rest)?);
    }
    for (v, b) in a.iter() {
        clauses.push(Clause::unit(if b {
            Literal::pos(v)
        } else {
            Literal::neg(v)
        }));
    }
    CnfFormula::new(n, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{disagreement_set, satisfying_set, DlItem, Term};

    fn clause(signed: &[i64]) -> Clause {
        Clause::new(signed.iter().map(|&s| Literal::from_signed(s).unwrap())).unwrap()
    }

    fn term(signed: &[i64]) -> Term {
        Term::new(signed.iter().map(|&s| Literal::from_signed(s).unwrap())).unwrap()
    }

    #[test]
    fn disagreement_single_pair() {
        let c = DecisionList::new(
            3,
            1,
            vec![
                DlItem {
                    term: term(&[1]),
                    output: true,
                },
                DlItem {
                    term: Term::truth(),
                    output: false,
                },
            ],
        )
        .unwrap();
        let h = DecisionList::constant(3, 1, false).unwrap();
        let parts = disagreement_cnfs(&c, &h).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!((parts[0].i, parts[0].j), (0, 0));
        let sat = satisfying_set(&parts[0].formula).unwrap();
        let expected = crate::hypercube::PointSet::from_predicate(3, |x| x.get(0)).unwrap();
        assert_eq!(sat, expected);
    }

    #[test]
    fn disagreement_of_identical_lists_is_empty() {
        let c = DecisionList::new(
            4,
            2,
            vec![
                DlItem {
                    term: term(&[1, -3]),
                    output: true,
                },
                DlItem {
                    term: term(&[2]),
                    output: false,
                },
                DlItem {
                    term: Term::truth(),
                    output: true,
                },
            ],
        )
        .unwrap();
        let parts = disagreement_cnfs(&c, &c).unwrap();
        assert!(!parts.is_empty());
        for part in parts {
            assert!(satisfying_set(&part.formula).unwrap().is_empty());
        }
        assert!(disagreement_set(&c, &c).unwrap().is_empty());
    }

    #[test]
    fn greedy_first_fit_examples() {
        let phi =
            CnfFormula::new(5, vec![clause(&[1, 2]), clause(&[2, 3]), clause(&[4, 5])]).unwrap();
        let m = maximal_disjoint_clauses(&phi);
        assert_eq!(m.clauses, vec![0, 2]);
        assert_eq!(m.vars, vec![0, 1, 3, 4]);

        let disjoint =
            CnfFormula::new(6, vec![clause(&[1, -2]), clause(&[3]), clause(&[-4, 5])]).unwrap();
        assert_eq!(maximal_disjoint_clauses(&disjoint).clauses, vec![0, 1, 2]);

        let single = CnfFormula::new(3, vec![clause(&[-1, 3])]).unwrap();
        assert_eq!(maximal_disjoint_clauses(&single).clauses, vec![0]);
    }

    #[test]
    fn restriction_example() {
        let phi = CnfFormula::new(3, vec![clause(&[1, 2]), clause(&[-1, 3])]).unwrap();
        let mut a = PartialAssignment::new();
        a.bind(0, true).unwrap();
        let r = restrict(&phi, &a).unwrap();
        assert_eq!(r.clauses(), &[clause(&[3]), clause(&[1])]);
        assert_eq!(r.width(), 1);
    }

    #[test]
    fn restriction_to_falsum() {
        let phi = CnfFormula::new(3, vec![clause(&[1, 2]), clause(&[3])]).unwrap();
        let a = PartialAssignment::from_pattern(&[0, 1], 0);
        let r = restrict(&phi, &a).unwrap();
        assert!(r.is_falsum());
        assert!(satisfying_set(&r).unwrap().is_empty());
    }

    #[test]
    fn restriction_rejects_out_of_range_binding() {
        let phi = CnfFormula::new(3, vec![clause(&[1, 2])]).unwrap();
        let mut a = PartialAssignment::new();
        a.bind(7, true).unwrap();
        assert!(restrict(&phi, &a).is_err());
    }

    #[test]
    fn restriction_drops_width_on_maximal_sets() {
        let phi = CnfFormula::new(
            6,
            vec![
                clause(&[1, 2]),
                clause(&[2, -3]),
                clause(&[3, 4]),
                clause(&[-5, 6]),
                clause(&[-1, 5]),
            ],
        )
        .unwrap();
        let m = maximal_disjoint_clauses(&phi);
        for pattern in 0..(1u64 << m.vars.len()) {
            let a = PartialAssignment::from_pattern(&m.vars, pattern);
            let r = restrict(&phi, &a).unwrap();
            let bound: Vec<usize> = m.vars.clone();
            let non_unit_max = r
                .clauses()
                .iter()
                .filter(|c| !(c.width() == 1 && bound.contains(&c.literals()[0].var)))
                .map(Clause::width)
                .max()
                .unwrap_or(0);
            assert!(non_unit_max <= 1, "pattern {pattern}: width {non_unit_max}");
            // the restriction agrees with φ on points consistent with a
            for raw in 0..64u64 {
                let consistent = a.iter().all(|(v, b)| ((raw >> v) & 1 == 1) == b);
                if consistent {
                    assert_eq!(r.eval_raw(raw), phi.eval_raw(raw));
                } else {
                    assert!(!r.eval_raw(raw));
                }
            }
        }
    }
}
