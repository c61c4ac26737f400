//! Two-phase dense tableau simplex over the rationals with Bland's rule.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `minimize objective·x` subject to the constraints and bounds. Variables
/// are free unless a bound is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

impl LpProblem {
    pub fn new(objective: Vec<Rational>) -> Self {
        let q = objective.len();
        LpProblem {
            objective,
            constraints: Vec::new(),
            lower: vec![None; q],
            upper: vec![None; q],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint arity");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_lower(&mut self, var: usize, bound: Rational) {
        self.lower[var] = Some(bound);
    }

    pub fn set_upper(&mut self, var: usize, bound: Rational) {
        self.upper[var] = Some(bound);
    }

    /// Checks `x` against every constraint and bound, exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        let bounds_ok = x.iter().enumerate().all(|(k, xk)| {
            self.lower[k].as_ref().is_none_or(|l| xk >= l)
                && self.upper[k].as_ref().is_none_or(|u| xk <= u)
        });
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<(Vec<Rational>, Rational)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

// How an original variable is expressed through nonnegative columns.
#[derive(Debug, Clone)]
enum VarMap {
    Shift(usize, Rational),
    Flip(usize, Rational),
    Split(usize, usize),
}

struct StandardForm {
    // rows of A z = b with b >= 0, z >= 0
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    // first column of each row's initial basic variable
    initial_basis: Vec<usize>,
    artificial_start: usize,
    maps: Vec<VarMap>,
}

fn standardize(p: &LpProblem) -> StandardForm {
    let q = p.num_vars();
    let mut maps = Vec::with_capacity(q);
    let mut cols = 0;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for k in 0..q {
        let map = match (&p.lower[k], &p.upper[k]) {
            (Some(l), u) => {
                if let Some(u) = u {
                    bound_rows.push((cols, u - l));
                }
                VarMap::Shift(cols, l.clone())
            }
            (None, Some(u)) => VarMap::Flip(cols, u.clone()),
            (None, None) => {
                cols += 1;
                VarMap::Split(cols - 1, cols)
            }
        };
        cols += 1;
        maps.push(map);
    }
    let structural = cols;

    // Substitute into each row: (coefficients over structural columns, relation, rhs).
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for con in &p.constraints {
        let mut coeffs = vec![Rational::zero(); structural];
        let mut rhs = con.rhs.clone();
        for (a, map) in con.coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match map {
                VarMap::Shift(col, l) => {
                    coeffs[*col] += a;
                    rhs -= a * l;
                }
                VarMap::Flip(col, u) => {
                    coeffs[*col] -= a;
                    rhs -= a * u;
                }
                VarMap::Split(pos, neg) => {
                    coeffs[*pos] += a;
                    coeffs[*neg] -= a;
                }
            }
        }
        rows.push((coeffs, con.relation, rhs));
    }
    for (col, width) in bound_rows {
        let mut coeffs = vec![Rational::zero(); structural];
        coeffs[col] = Rational::from_integer(1.into());
        rows.push((coeffs, Relation::Le, width));
    }
    for (coeffs, relation, rhs) in rows.iter_mut() {
        if rhs.is_negative() {
            for x in coeffs.iter_mut() {
                *x = -&*x;
            }
            *rhs = -&*rhs;
            *relation = match relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificial_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let artificial_start = structural + slack_count;
    let width = artificial_start + artificial_count;
    let one = Rational::from_integer(1.into());

    let mut a = Vec::with_capacity(rows.len());
    let mut b = Vec::with_capacity(rows.len());
    let mut initial_basis = Vec::with_capacity(rows.len());
    let mut slack = structural;
    let mut artificial = artificial_start;
    for (coeffs, relation, rhs) in rows {
        let mut row = coeffs;
        row.resize(width, Rational::zero());
        match relation {
            Relation::Le => {
                row[slack] = one.clone();
                initial_basis.push(slack);
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -one.clone();
                slack += 1;
                row[artificial] = one.clone();
                initial_basis.push(artificial);
                artificial += 1;
            }
            Relation::Eq => {
                row[artificial] = one.clone();
                initial_basis.push(artificial);
                artificial += 1;
            }
        }
        a.push(row);
        b.push(rhs);
    }

    let mut c = vec![Rational::zero(); width];
    for (obj, map) in p.objective.iter().zip(&maps) {
        match map {
            VarMap::Shift(col, _) => c[*col] += obj,
            VarMap::Flip(col, _) => c[*col] -= obj,
            VarMap::Split(pos, neg) => {
                c[*pos] += obj;
                c[*neg] -= obj;
            }
        }
    }

    StandardForm {
        a,
        b,
        c,
        initial_basis,
        artificial_start,
        maps,
    }
}

struct Tableau {
    // each row holds the coefficients followed by the right-hand side
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    // reduced costs; last entry is minus the objective value
    cost: Vec<Rational>,
    width: usize,
}

impl Tableau {
    fn set_cost(&mut self, c: &[Rational]) {
        let mut cost: Vec<Rational> = c.to_vec();
        cost.push(Rational::zero());
        for (row, &bcol) in self.rows.iter().zip(&self.basis) {
            let cb = &c[bcol];
            if cb.is_zero() {
                continue;
            }
            for (d, x) in cost.iter_mut().zip(row) {
                if !x.is_zero() {
                    *d -= cb * x;
                }
            }
        }
        self.cost = cost;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solves `p` exactly. Optimal results are re-verified against the dual
/// read off the final tableau before being returned.
pub fn lp_solve(p: &LpProblem) -> LpOutcome {
    let sf = standardize(p);
    let width = sf.c.len();
    let mut t = Tableau {
        rows: sf
            .a
            .iter()
            .zip(&sf.b)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect(),
        basis: sf.initial_basis.clone(),
        cost: Vec::new(),
        width,
    };

    if sf.artificial_start < width {
        let mut phase_one = vec![Rational::zero(); width];
        for c in phase_one.iter_mut().skip(sf.artificial_start) {
            *c = Rational::from_integer(1.into());
        }
        t.set_cost(&phase_one);
        t.optimize(width);
        if !t.cost[width].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-level artificials out of the basis where possible;
        // rows where this fails are redundant and stay inert.
        for r in 0..t.rows.len() {
            if t.basis[r] < sf.artificial_start {
                continue;
            }
            if let Some(c) = (0..sf.artificial_start).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    t.set_cost(&sf.c);
    if !t.optimize(sf.artificial_start) {
        return LpOutcome::Unbounded;
    }

    let mut z = vec![Rational::zero(); width];
    for (row, &bcol) in t.rows.iter().zip(&t.basis) {
        z[bcol] = row[width].clone();
    }
    let dual: Vec<Rational> = sf
        .initial_basis
        .iter()
        .map(|&j| &sf.c[j] - &t.cost[j])
        .collect();
    audit(&sf, &z, &dual);

    let x: Vec<Rational> = sf
        .maps
        .iter()
        .map(|map| match map {
            VarMap::Shift(col, l) => l + &z[*col],
            VarMap::Flip(col, u) => u - &z[*col],
            VarMap::Split(pos, neg) => &z[*pos] - &z[*neg],
        })
        .collect();
    let value = p.objective.iter().zip(&x).map(|(c, xk)| c * xk).sum();
    LpOutcome::Optimal { x, value }
}

// Primal feasibility, dual feasibility and equal objective values certify
// optimality independently of the pivoting history.
fn audit(sf: &StandardForm, z: &[Rational], y: &[Rational]) {
    for (row, b) in sf.a.iter().zip(&sf.b) {
        let lhs: Rational = row
            .iter()
            .zip(z)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, zj)| a * zj)
            .sum();
        assert_eq!(&lhs, b, "simplex audit: primal row violated");
    }
    assert!(
        z.iter().all(|zj| !zj.is_negative()),
        "simplex audit: negative variable"
    );
    for j in 0..sf.artificial_start {
        let reduced: Rational = &sf.c[j]
            - sf.a
                .iter()
                .zip(y)
                .filter(|(row, _)| !row[j].is_zero())
                .map(|(row, yr)| &row[j] * yr)
                .sum::<Rational>();
        assert!(
            !reduced.is_negative(),
            "simplex audit: dual infeasible column {j}"
        );
    }
    let primal: Rational = sf.c.iter().zip(z).map(|(c, zj)| c * zj).sum();
    let dual: Rational = sf.b.iter().zip(y).map(|(b, yr)| b * yr).sum();
    assert_eq!(primal, dual, "simplex audit: duality gap");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_lower_bound() {
        let mut p = LpProblem::new(ints(&[1]));
        p.add(ints(&[1]), Relation::Ge, int(3));
        assert_eq!(
            lp_solve(&p),
            LpOutcome::Optimal {
                x: ints(&[3]),
                value: int(3)
            }
        );
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut p = LpProblem::new(ints(&[0]));
        p.add(ints(&[1]), Relation::Ge, int(1));
        p.add(ints(&[1]), Relation::Le, int(0));
        assert_eq!(lp_solve(&p), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut p = LpProblem::new(ints(&[-1, 0]));
        p.add(ints(&[1, -1]), Relation::Le, int(1));
        assert_eq!(lp_solve(&p), LpOutcome::Unbounded);
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0
        let mut p = LpProblem::new(ints(&[-3, -5]));
        p.set_lower(0, int(0));
        p.set_lower(1, int(0));
        p.add(ints(&[1, 0]), Relation::Le, int(4));
        p.add(ints(&[0, 2]), Relation::Le, int(12));
        p.add(ints(&[3, 2]), Relation::Le, int(18));
        let (x, value) = lp_solve(&p).optimal().unwrap();
        assert_eq!(x, ints(&[2, 6]));
        assert_eq!(value, int(-36));
    }

    #[test]
    fn bounds_and_equalities() {
        // min x - y s.t. x + y = 1, 1/4 <= x <= 1, y <= 1/2
        let mut p = LpProblem::new(ints(&[1, -1]));
        p.add(ints(&[1, 1]), Relation::Eq, int(1));
        p.set_lower(0, ratio(1, 4));
        p.set_upper(0, int(1));
        p.set_upper(1, ratio(1, 2));
        let (x, value) = lp_solve(&p).optimal().unwrap();
        assert_eq!(x, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(value, int(0));
        assert!(p.is_feasible(&x));
    }

    #[test]
    fn redundant_equalities() {
        let mut p = LpProblem::new(ints(&[1, 1]));
        p.add(ints(&[1, 1]), Relation::Eq, int(2));
        p.add(ints(&[2, 2]), Relation::Eq, int(4));
        p.add(ints(&[1, 0]), Relation::Ge, int(0));
        p.add(ints(&[0, 1]), Relation::Ge, int(0));
        let (_, value) = lp_solve(&p).optimal().unwrap();
        assert_eq!(value, int(2));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule.
        let mut p = LpProblem::new(vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)]);
        for k in 0..4 {
            p.set_lower(k, int(0));
        }
        p.add(
            vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)],
            Relation::Le,
            int(0),
        );
        p.add(
            vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)],
            Relation::Le,
            int(0),
        );
        p.add(ints(&[0, 0, 1, 0]), Relation::Le, int(1));
        let (_, value) = lp_solve(&p).optimal().unwrap();
        assert_eq!(value, ratio(-1, 20));
    }
}
