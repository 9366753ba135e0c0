//! Equisatisfiable rewrites that bring an arbitrary CNF formula into the
//! shape a builder accepts.

use crate::cnf::{
    pad_literal_occurrences, sat_solve, transform_connect, transform_occurrence_bound, Assignment, CnfError, CnfFormula,
    Lit, OccurrenceBound,
};

/// At least `n` variables; the extra ones are unconstrained.
pub fn ensure_vars(f: &CnfFormula, n: usize) -> CnfFormula {
    CnfFormula::new(f.num_vars().max(n), f.clauses().to_vec()).expect("widening keeps clauses valid")
}

/// Every clause gets exactly three literals. Short clauses are widened
/// with fresh variables `y`, `z` shared by all of them: `(a ∨ b)` becomes
/// `(a ∨ b ∨ y)(a ∨ b ∨ ¬y)` and `(a)` the four sign patterns over `y, z`.
pub fn exact_three(f: &CnfFormula) -> Result<CnfFormula, CnfError> {
    if f.clauses().iter().all(|c| c.len() == 3) {
        return Ok(f.clone());
    }
    let n = f.num_vars();
    let (y, z) = (n, n + 1);
    let mut out = Vec::new();
    for (j, c) in f.clauses().iter().enumerate() {
        match c.len() {
            3 => out.push(c.clone()),
            2 => {
                for s in [true, false] {
                    out.push(vec![c[0], c[1], Lit { var: y, positive: s }]);
                }
            }
            1 => {
                for (sy, sz) in [(true, true), (false, true), (true, false), (false, false)] {
                    out.push(vec![c[0], Lit { var: y, positive: sy }, Lit { var: z, positive: sz }]);
                }
            }
            size => return Err(CnfError::OversizedClause { clause: j, size, max: 3 }),
        }
    }
    CnfFormula::new(n + 2, out)
}

/// Unit clauses `(a)` become `(a ∨ y)(a ∨ ¬y)` with one shared fresh `y`.
pub fn no_units(f: &CnfFormula) -> CnfFormula {
    if f.clauses().iter().all(|c| c.len() >= 2) {
        return f.clone();
    }
    let y = f.num_vars();
    let mut out = Vec::new();
    for c in f.clauses() {
        if c.len() == 1 {
            out.push(vec![c[0], Lit::pos(y)]);
            out.push(vec![c[0], Lit::neg(y)]);
        } else {
            out.push(c.clone());
        }
    }
    CnfFormula::new(y + 1, out).expect("unit expansion is well formed")
}

/// Repeats the first clause until there are at least `m` clauses.
pub fn at_least_clauses(f: &CnfFormula, m: usize) -> CnfFormula {
    let mut clauses = f.clauses().to_vec();
    while clauses.len() < m {
        clauses.push(clauses[0].clone());
    }
    CnfFormula::new(f.num_vars(), clauses).expect("duplicated clauses stay valid")
}

/// Appends tautologies `(y ∨ ¬y)` on fresh variables until there are at
/// least `m` clauses.
pub fn at_least_clauses_fresh(f: &CnfFormula, m: usize) -> CnfFormula {
    let mut extra = Vec::new();
    let mut next = f.num_vars();
    while f.num_clauses() + extra.len() < m {
        extra.push(vec![Lit::pos(next), Lit::neg(next)]);
        next += 1;
    }
    f.with_clauses_appended(next - f.num_vars(), extra)
}

/// Pipeline for the (1, k) constructions: clauses of size 2 or 3, every
/// literal present, at least `min_clauses` clauses, connected incidence
/// graph, at most 5 occurrences per variable and 3 per literal.
pub fn for_one_k(f: &CnfFormula, min_clauses: usize) -> Result<CnfFormula, CnfError> {
    if let Some((j, c)) = f.clauses().iter().enumerate().find(|(_, c)| c.len() > 3) {
        return Err(CnfError::OversizedClause { clause: j, size: c.len(), max: 3 });
    }
    let g = ensure_vars(&no_units(f), 1);
    let g = pad_literal_occurrences(&g, 1);
    let g = at_least_clauses_fresh(&g, min_clauses);
    let g = transform_connect(&g);
    transform_occurrence_bound(&g, OccurrenceBound::Five)
}

/// Pipeline for the ring constructions: at least two variables, every
/// literal at least `t` times, optionally exact-3 clauses.
pub fn for_ring(f: &CnfFormula, t: usize, exact3: bool) -> Result<CnfFormula, CnfError> {
    let g = if exact3 { exact_three(f)? } else { f.clone() };
    if let Some((j, c)) = g.clauses().iter().enumerate().find(|(_, c)| c.len() > 3) {
        return Err(CnfError::OversizedClause { clause: j, size: c.len(), max: 3 });
    }
    Ok(pad_literal_occurrences(&ensure_vars(&g, 2), t))
}

/// Extends an assignment of the first `partial.len()` variables to one
/// satisfying `f`, if any. All rewrites above keep the original variables
/// at their indices, so this maps source assignments to prepared ones.
pub fn extend_assignment(f: &CnfFormula, partial: &Assignment) -> Result<Option<Assignment>, CnfError> {
    let fixed: Vec<Vec<Lit>> =
        (0..partial.len().min(f.num_vars())).map(|v| vec![Lit { var: v, positive: partial.value(v) }]).collect();
    sat_solve(&f.with_clauses_appended(0, fixed))
}
