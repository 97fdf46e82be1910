//! Dense exact-rational simplex for `max c·x s.t. A x <= b, x >= 0` with
//! `b >= 0`, so the slack basis is feasible from the start. Pivoting follows
//! Bland's rule, which cannot cycle; results are a pure function of the
//! input ordering.

use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { objective: Weight, solution: Vec<Weight> },
    Unbounded,
}

/// Panics if the shapes disagree or some `rhs` entry is negative.
pub fn maximize(objective: &[Weight], rows: &[Vec<Weight>], rhs: &[Weight]) -> LpOutcome {
    let n = objective.len();
    let m = rows.len();
    assert_eq!(rhs.len(), m);
    assert!(rhs.iter().all(|b| !b.is_negative()), "infeasible origin");

    // columns 0..n structural, n..n+m slack, last is rhs
    let width = n + m + 1;
    let mut tableau: Vec<Vec<Weight>> = Vec::with_capacity(m + 1);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n);
        let mut t = vec![Weight::zero(); width];
        t[..n].clone_from_slice(row);
        t[n + i] = Weight::one();
        t[width - 1] = rhs[i].clone();
        tableau.push(t);
    }
    // reduced-cost row stores -c so that optimality is "no negative entry"
    let mut cost = vec![Weight::zero(); width];
    for (j, c) in objective.iter().enumerate() {
        cost[j] = -c;
    }
    tableau.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(entering) = (0..width - 1).find(|&j| tableau[m][j].is_negative()) {
        let mut leaving: Option<(usize, Weight)> = None;
        for (i, row) in tableau.iter().enumerate().take(m) {
            if !row[entering].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[entering];
            let better = match &leaving {
                None => true,
                Some((best_row, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*best_row]),
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leaving else {
            return LpOutcome::Unbounded;
        };
        pivot(&mut tableau, pivot_row, entering);
        basis[pivot_row] = entering;
    }

    let mut solution = vec![Weight::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            solution[b] = tableau[i][width - 1].clone();
        }
    }
    LpOutcome::Optimal {
        objective: tableau[m][width - 1].clone(),
        solution,
    }
}

fn pivot(tableau: &mut [Vec<Weight>], row: usize, col: usize) {
    let factor = tableau[row][col].clone();
    if factor != Weight::one() {
        for v in tableau[row].iter_mut() {
            if !v.is_zero() {
                *v = &*v / &factor;
            }
        }
    }
    let pivot_row = tableau[row].clone();
    for (i, r) in tableau.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let scale = r[col].clone();
        for (v, p) in r.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &(&scale * p);
            }
        }
    }
}
