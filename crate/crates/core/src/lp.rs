//! Dense two-phase simplex over ℚ with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<BigRational>, value: BigRational },
}

/// Maximises `c·x` subject to `a·x = b`, `x ≥ 0`.
pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let n = c.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(a.len());
    let m = a.len();
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "constraint width");
        let flip = rhs.is_negative();
        let mut t: Vec<BigRational> = row.iter().map(|x| if flip { -x } else { x.clone() }).collect();
        t.extend((0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
        t.push(if flip { -rhs } else { rhs.clone() });
        rows.push(t);
    }
    let mut tab = Tableau { rows, basis: (n..n + m).collect(), width: n + m };

    let phase1: Vec<BigRational> =
        (0..n + m).map(|j| if j >= n { -BigRational::one() } else { BigRational::zero() }).collect();
    if !tab.run(&phase1, n + m) {
        unreachable!("phase one is bounded");
    }
    if tab.objective(&phase1).is_negative() {
        return LpOutcome::Infeasible;
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < tab.rows.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    let mut phase2 = c.to_vec();
    phase2.extend((0..m).map(|_| BigRational::zero()));
    if !tab.run(&phase2, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &bv) in tab.rows.iter().zip(&tab.basis) {
        if bv < n {
            x[bv] = row[tab.width].clone();
        }
    }
    let value = x.iter().zip(c).fold(BigRational::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { x, value }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn objective(&self, c: &[BigRational]) -> BigRational {
        self.rows.iter().zip(&self.basis).fold(BigRational::zero(), |acc, (row, &bv)| acc + &c[bv] * &row[self.width])
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Simplex iterations with columns `< allowed` eligible to enter.
    /// Returns false if unbounded.
    fn run(&mut self, c: &[BigRational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let z = self.rows.iter().zip(&self.basis).fold(BigRational::zero(), |acc, (row, &bv)| acc + &c[bv] * &row[j]);
                (&c[j] - z).is_positive()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / &row[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_lp() {
        // max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6
        let c = vec![q(1), q(1), q(0), q(0)];
        let a = vec![vec![q(1), q(2), q(1), q(0)], vec![q(3), q(1), q(0), q(1)]];
        let b = vec![q(4), q(6)];
        match maximize(&c, &a, &b) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, BigRational::new(14.into(), 5.into())),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![q(1), q(1)]];
        assert_eq!(maximize(&[q(0), q(0)], &a, &[q(-1)]), LpOutcome::Infeasible);
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&[q(1), q(0)], &a, &[q(0)]), LpOutcome::Unbounded);
    }
}
