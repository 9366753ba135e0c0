use super::{Assignment, CnfError, CnfFormula, Lit};

/// Guard for the DPLL oracle.
#[derive(Clone, Copy, Debug)]
pub struct SatConfig {
    pub max_vars: usize,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig { max_vars: 256 }
    }
}

impl SatConfig {
    /// Complete DPLL with unit propagation. Unassigned variables of a
    /// satisfying assignment are set to false.
    pub fn solve(&self, f: &CnfFormula) -> Result<Option<Assignment>, CnfError> {
        if f.num_vars() > self.max_vars {
            return Err(CnfError::SizeGuard { n: f.num_vars(), max: self.max_vars });
        }
        let mut vals = vec![None; f.num_vars()];
        if dpll(f.clauses(), &mut vals) {
            Ok(Some(Assignment::new(vals.into_iter().map(|v| v.unwrap_or(false)).collect())))
        } else {
            Ok(None)
        }
    }
}

pub fn sat_solve(f: &CnfFormula) -> Result<Option<Assignment>, CnfError> {
    SatConfig::default().solve(f)
}

enum Status {
    Satisfied,
    Conflict,
    Unit(Lit),
    Open(usize),
}

fn status(clause: &[Lit], vals: &[Option<bool>]) -> Status {
    let mut free = 0;
    let mut last = None;
    for &l in clause {
        match vals[l.var] {
            Some(b) if b == l.positive => return Status::Satisfied,
            Some(_) => {}
            None => {
                free += 1;
                last = Some(l);
            }
        }
    }
    match (free, last) {
        (0, _) => Status::Conflict,
        (1, Some(l)) => Status::Unit(l),
        _ => Status::Open(free),
    }
}

fn dpll(clauses: &[Vec<Lit>], vals: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    // Unit propagation to fixpoint.
    let branch = loop {
        let mut changed = false;
        let mut best: Option<(usize, usize)> = None;
        for (j, c) in clauses.iter().enumerate() {
            match status(c, vals) {
                Status::Satisfied => {}
                Status::Conflict => {
                    undo(vals, &trail);
                    return false;
                }
                Status::Unit(l) => {
                    vals[l.var] = Some(l.positive);
                    trail.push(l.var);
                    changed = true;
                }
                Status::Open(free) => {
                    if best.is_none_or(|(b, _)| free < b) {
                        best = Some((free, j));
                    }
                }
            }
        }
        if !changed {
            break best.map(|(_, j)| j);
        }
    };
    let Some(j) = branch else {
        return true;
    };
    let lit = *clauses[j].iter().find(|l| vals[l.var].is_none()).expect("open clause has a free literal");
    for value in [lit.positive, !lit.positive] {
        vals[lit.var] = Some(value);
        if dpll(clauses, vals) {
            return true;
        }
        vals[lit.var] = None;
    }
    undo(vals, &trail);
    false
}

fn undo(vals: &mut [Option<bool>], trail: &[usize]) {
    for &v in trail {
        vals[v] = None;
    }
}

/// Brute force over all assignments; test oracle for small formulas.
pub fn brute_force_sat(f: &CnfFormula) -> Option<Assignment> {
    assert!(f.num_vars() <= 24, "brute force is for tiny formulas");
    (0..1u64 << f.num_vars()).map(|b| Assignment::from_bits(f.num_vars(), b)).find(|a| f.is_satisfied_by(a))
}
