//! Exact phase-one simplex for rational linear feasibility.
//!
//! Decides whether `{x >= 0 : A x = b}` is nonempty, in exact arithmetic.
//! Bland's rule guarantees termination, and since every pivot is rational the
//! feasibility verdict is a theorem, not an approximation.

use crate::rat::Rat;

/// True iff there exists `x >= 0` with `A x = b` (componentwise, exact).
///
/// `a` is row-major with `a.len()` constraints; all rows must have equal
/// length and match `b.len()` rows.
#[allow(clippy::needless_range_loop)]
pub(crate) fn feasible_eq_nonneg(a: &[Vec<Rat>], b: &[Rat]) -> bool {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    if rows == 0 {
        return true;
    }
    if cols == 0 {
        return b.iter().all(Rat::is_zero);
    }

    // Tableau columns: structural 0..cols, artificial cols..cols+rows, rhs last.
    let total = cols + rows;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row: Vec<Rat> = Vec::with_capacity(total + 1);
        for j in 0..cols {
            row.push(if flip { -&a[i][j] } else { a[i][j].clone() });
        }
        for k in 0..rows {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }

    // Objective: minimize the artificial sum. Maintain reduced costs and -w.
    let mut obj: Vec<Rat> = vec![Rat::zero(); total + 1];
    for j in 0..cols {
        let mut s = Rat::zero();
        for row in &t {
            s = s + row[j].clone();
        }
        obj[j] = -s;
    }
    let mut w = Rat::zero();
    for row in &t {
        w = w + row[total].clone();
    }
    obj[total] = -w;

    let mut basis: Vec<usize> = (cols..total).collect();

    // Bland: smallest-index column with negative reduced cost.
    while let Some(enter) = (0..total).find(|&j| obj[j].is_negative()) {
        // Ratio test; ties resolved by smallest basis variable (Bland).
        let mut pivot_row: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][total] / &t[i][enter];
                let better = match &best {
                    None => true,
                    Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[pivot_row.unwrap()]),
                };
                if better {
                    best = Some(ratio);
                    pivot_row = Some(i);
                }
            }
        }
        let p = pivot_row.expect("phase-one objective is bounded below by zero");

        // Pivot on (p, enter).
        let piv = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v = &*v / &piv;
        }
        for i in 0..rows {
            if i != p && !t[i][enter].is_zero() {
                let f = t[i][enter].clone();
                for j in 0..=total {
                    let delta = &f * &t[p][j];
                    t[i][j] = &t[i][j] - &delta;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..=total {
                let delta = &f * &t[p][j];
                obj[j] = &obj[j] - &delta;
            }
        }
        basis[p] = enter;
    }
    // Feasible iff the artificial sum reached exactly zero.
    obj[total].is_zero()
}
