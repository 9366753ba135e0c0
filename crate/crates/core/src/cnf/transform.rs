use std::collections::BTreeMap;

use super::{CnfError, CnfFormula, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OccurrenceBound {
    /// Each variable in at most 3 clauses, each literal at most twice.
    Three,
    /// Each variable at most 5 times, each literal at most 3 times, and
    /// the incidence graph stays connected.
    Five,
}

/// Chains the components of the incidence graph. For consecutive
/// components with representative literals `l`, `l2` this adds fresh `y`,
/// `z` and the clauses `(l ∨ y ∨ l2)`, `(¬y ∨ z ∨ l2)`, `(y ∨ ¬z ∨ l)`,
/// all satisfied by `y = z = true`.
pub fn transform_connect(f: &CnfFormula) -> CnfFormula {
    let b = f.raw_incidence_graph();
    let comps = b.connected_components();
    if comps.len() <= 1 {
        return f.clone();
    }
    let n2 = 2 * f.num_vars();
    let mut reps: Vec<Lit> = comps
        .iter()
        .filter_map(|c| c.iter().copied().filter(|&v| v < n2).min())
        .map(|v| Lit { var: v / 2, positive: v % 2 == 0 })
        .collect();
    reps.sort();
    let mut extra = Vec::new();
    let mut next = f.num_vars();
    for w in reps.windows(2) {
        let (l, l2) = (w[0], w[1]);
        let (y, z) = (Lit::pos(next), Lit::pos(next + 1));
        next += 2;
        extra.push(vec![l, y, l2]);
        extra.push(vec![y.negated(), z, l2]);
        extra.push(vec![y, z.negated(), l]);
    }
    f.with_clauses_appended(next - f.num_vars(), extra)
}

fn needs_split(occ: usize, clauses: usize, max_lit: usize) -> bool {
    clauses > 3 || max_lit > 2 || occ > 4
}

/// Splits every variable that violates the ≤3-SAT(3) bounds into copies
/// `x_1 = x, x_2, …` (one per occurrence) tied by the implication cycle
/// `(¬x_t ∨ x_{t+1})`. With [`OccurrenceBound::Five`] the reversed cycle
/// `(x_t ∨ ¬x_{t+1})` is added as well, and an even cycle gets one extra
/// copy so that its clauses stay connected in the incidence graph.
pub fn transform_occurrence_bound(f: &CnfFormula, bound: OccurrenceBound) -> Result<CnfFormula, CnfError> {
    for (j, c) in f.clauses().iter().enumerate() {
        if c.len() > 3 {
            return Err(CnfError::OversizedClause { clause: j, size: c.len(), max: 3 });
        }
    }
    let counts = f.literal_counts();
    let per_var = f.clauses_per_variable();
    let mut clauses: Vec<Vec<Lit>> = f.clauses().to_vec();
    let mut extra = Vec::new();
    let mut next = f.num_vars();
    for x in 0..f.num_vars() {
        let (q, p) = (counts[2 * x], counts[2 * x + 1]);
        if !needs_split(q + p, per_var[x], q.max(p)) {
            continue;
        }
        // Occurrences in clause order.
        let mut occ = Vec::new();
        for (j, c) in clauses.iter().enumerate() {
            for (pos, l) in c.iter().enumerate() {
                if l.var == x {
                    occ.push((j, pos));
                }
            }
        }
        let mut r = occ.len();
        if bound == OccurrenceBound::Five && r % 2 == 0 {
            r += 1;
        }
        let copies: Vec<usize> = std::iter::once(x).chain(next..next + r - 1).collect();
        next += r - 1;
        for (t, &(j, pos)) in occ.iter().enumerate() {
            clauses[j][pos].var = copies[t];
        }
        for t in 0..r {
            let (a, b) = (copies[t], copies[(t + 1) % r]);
            extra.push(vec![Lit::neg(a), Lit::pos(b)]);
            if bound == OccurrenceBound::Five {
                extra.push(vec![Lit::pos(a), Lit::neg(b)]);
            }
        }
    }
    if extra.is_empty() {
        return Ok(f.clone());
    }
    clauses.extend(extra);
    CnfFormula::new(next, clauses)
}

/// Makes every literal occur in at least `t` clauses: an absent literal of
/// `y` gets a tautology `(y ∨ ¬y ∨ x)` with `x` another variable, and a
/// literal occurring too rarely gets its first clause duplicated.
pub fn pad_literal_occurrences(f: &CnfFormula, t: usize) -> CnfFormula {
    assert!(t == 1 || t == 2, "padding target must be 1 or 2");
    let mut clauses = f.clauses().to_vec();
    let mut counts: BTreeMap<Lit, usize> = BTreeMap::new();
    for c in &clauses {
        for &l in c {
            *counts.entry(l).or_default() += 1;
        }
    }
    for var in 0..f.num_vars() {
        for lit in [Lit::pos(var), Lit::neg(var)] {
            while counts.get(&lit).copied().unwrap_or(0) < t {
                let new_clause = if counts.get(&lit).copied().unwrap_or(0) == 0 {
                    let mut c = vec![Lit::pos(var), Lit::neg(var)];
                    if f.num_vars() > 1 {
                        c.push(Lit::pos(if var == 0 { 1 } else { 0 }));
                    }
                    c
                } else {
                    clauses.iter().find(|c| c.contains(&lit)).expect("literal occurs").clone()
                };
                for &l in &new_clause {
                    *counts.entry(l).or_default() += 1;
                }
                clauses.push(new_clause);
            }
        }
    }
    CnfFormula::new(f.num_vars(), clauses).expect("padding keeps clauses well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::sat::brute_force_sat;
    use crate::cnf::{figure_formula, Assignment};

    fn sat(f: &CnfFormula) -> bool {
        brute_force_sat(f).is_some()
    }

    fn four_occurrences() -> CnfFormula {
        CnfFormula::from_dimacs_clauses(3, &[&[1, 2], &[1, -2], &[-1, 3], &[-1, -3, 2]]).unwrap()
    }

    #[test]
    fn connect_identity_when_connected() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[-1, -2], &[1, -2], &[-1, 2]]).unwrap();
        assert!(f.is_connected_instance());
        assert_eq!(transform_connect(&f), f);
    }

    #[test]
    fn connect_bridges_components() {
        let f = CnfFormula::from_dimacs_clauses(4, &[&[1, -1, 2], &[-2, 1], &[3, -3, 4], &[-4, 3]]).unwrap();
        assert!(!f.is_connected_instance());
        let g = transform_connect(&f);
        assert!(g.is_connected_instance());
        assert_eq!(g.num_clauses(), f.num_clauses() + 3);
        let fig = transform_connect(&figure_formula());
        assert!(fig.is_connected_instance());
        assert_eq!(sat(&fig), sat(&figure_formula()));
        assert_eq!(sat(&f), sat(&g));

        let unsat = CnfFormula::from_dimacs_clauses(3, &[&[1], &[-1], &[2, -2], &[3, -3]]).unwrap();
        let g = transform_connect(&unsat);
        assert_eq!(unsat.raw_incidence_graph().connected_components().len(), 4);
        assert_eq!(g.num_clauses(), unsat.num_clauses() + 9);
        assert!(g.is_connected_instance());
        assert!(!sat(&g));
        // The fresh literals all occur.
        assert!(g.literal_counts()[2 * unsat.num_vars()..].iter().all(|&c| c > 0));
    }

    #[test]
    fn occurrence_bound_three() {
        let f = four_occurrences();
        let g = transform_occurrence_bound(&f, OccurrenceBound::Three).unwrap();
        assert_eq!(g.num_vars(), f.num_vars() + 3);
        assert_eq!(g.num_clauses(), f.num_clauses() + 4);
        assert!(g.clauses()[f.num_clauses()..].iter().all(|c| c.len() == 2));
        assert!(g.clauses_per_variable().iter().all(|&c| c <= 3));
        assert!(g.literal_counts().iter().all(|&c| c <= 2));
        assert_eq!(sat(&f), sat(&g));
    }

    #[test]
    fn occurrence_bound_identity() {
        let f = figure_formula();
        assert!(f.clauses_per_variable().contains(&4));
        let small = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[-1, -2]]).unwrap();
        assert_eq!(transform_occurrence_bound(&small, OccurrenceBound::Three).unwrap(), small);
        assert_eq!(transform_occurrence_bound(&small, OccurrenceBound::Five).unwrap(), small);
    }

    #[test]
    fn occurrence_bound_five() {
        let f = four_occurrences();
        assert!(f.is_connected_instance());
        let g = transform_occurrence_bound(&f, OccurrenceBound::Five).unwrap();
        // Four occurrences give an even cycle, so one extra copy is used.
        assert_eq!(g.num_clauses(), f.num_clauses() + 10);
        let prof = g.occurrence_profile();
        assert!(prof.iter().all(|&(q, p)| q + p <= 5 && q <= 3 && p <= 3));
        assert!(g.is_connected_instance());
        assert_eq!(sat(&f), sat(&g));
    }

    #[test]
    fn oversized_clause_rejected() {
        let f = CnfFormula::from_dimacs_clauses(4, &[&[1, 2, 3, 4]]).unwrap();
        assert!(matches!(
            transform_occurrence_bound(&f, OccurrenceBound::Three),
            Err(CnfError::OversizedClause { .. })
        ));
    }

    #[test]
    fn padding() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, 2], &[1, -2]]).unwrap();
        let g = pad_literal_occurrences(&f, 1);
        assert_eq!(g.num_clauses(), 3);
        assert_eq!(g.clause(2), &[Lit::pos(0), Lit::neg(0), Lit::pos(1)]);
        assert_eq!(sat(&f), sat(&g));

        let h = pad_literal_occurrences(&g, 2);
        assert!(h.occurrence_profile().iter().all(|&(q, p)| q.min(p) >= 2));
        assert_eq!(pad_literal_occurrences(&h, 2), h);

        let once = CnfFormula::from_dimacs_clauses(1, &[&[1], &[-1], &[-1]]).unwrap();
        let padded = pad_literal_occurrences(&once, 2);
        assert_eq!(padded.num_clauses(), 4);
        assert_eq!(padded.clause(3), &[Lit::pos(0)]);
        assert!(!sat(&padded));
        assert!(padded.is_satisfied_by(&Assignment::all(1, true)) == once.is_satisfied_by(&Assignment::all(1, true)));
    }
}
