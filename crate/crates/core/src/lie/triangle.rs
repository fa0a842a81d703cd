//! Deprit's triangle, built one diagonal at a time.

use crate::scalar::Exact;
use crate::series::PoissonSeries;

/// Values the triangle can hold: a single series or one series per element.
pub trait Linear: Clone {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, k: i64) -> Self;
    fn is_null(&self) -> bool;
}

impl<S: Exact> Linear for PoissonSeries<S> {
    fn zero() -> Self {
        PoissonSeries::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, k: i64) -> Self {
        self.scale_int(k, 1)
    }
    fn is_null(&self) -> bool {
        self.is_zero()
    }
}

impl<S: Exact> Linear for [PoissonSeries<S>; 6] {
    fn zero() -> Self {
        Default::default()
    }
    fn plus(&self, other: &Self) -> Self {
        std::array::from_fn(|j| self[j].add(&other[j]))
    }
    fn times(&self, k: i64) -> Self {
        std::array::from_fn(|j| self[j].scale_int(k, 1))
    }
    fn is_null(&self) -> bool {
        self.iter().all(PoissonSeries::is_zero)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Entries `F_{m,q}` of the recursion
/// `F_{m,q+1} = F_{m+1,q} + Σ_i C(m,i) L_{i+1}(F_{m−i,q})`.
///
/// `rows[d][q]` holds `F_{d−q,q}`. The operator is passed at each extension as
/// `op(i, (m, q), entry)` computing `L_i` of the entry at `(m, q)`.
#[derive(Clone, Debug)]
pub struct Triangle<V> {
    rows: Vec<Vec<V>>,
}

impl<V: Linear> Triangle<V> {
    pub fn new(f00: V) -> Self {
        Triangle {
            rows: vec![vec![f00]],
        }
    }

    /// Number of complete diagonals, i.e. highest order + 1.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, m: usize, q: usize) -> &V {
        &self.rows[m + q][q]
    }

    /// `F_{0,d}` of the last diagonal.
    pub fn last(&self) -> &V {
        let d = self.rows.len() - 1;
        &self.rows[d][d]
    }

    /// Appends diagonal `d` seeded with `F_{d,0}`.
    ///
    /// With `tentative` set, the single term `L_d(F_{0,0})` is left out; it is
    /// the only place where the newest generator order enters, and is added
    /// later with [`Triangle::complete`].
    pub fn extend<F>(&mut self, seed: V, tentative: bool, op: F)
    where
        F: Fn(usize, (usize, usize), &V) -> V,
    {
        let d = self.rows.len();
        let mut row: Vec<V> = Vec::with_capacity(d + 1);
        row.push(seed);
        for q in 1..=d {
            let m = d - q;
            let mut value = row[q - 1].clone();
            for i in 0..=m {
                if tentative && i + 1 == d {
                    continue;
                }
                let (mm, qq) = (m - i, q - 1);
                let entry = &self.rows[mm + qq][qq];
                // (0, 0) may be a placeholder the operator interprets itself.
                if entry.is_null() && (mm, qq) != (0, 0) {
                    continue;
                }
                let image = op(i + 1, (mm, qq), entry);
                let k = binomial(m, i);
                value = if k == 1 {
                    value.plus(&image)
                } else {
                    value.plus(&image.times(k))
                };
            }
            row.push(value);
        }
        self.rows.push(row);
    }

    /// Adds `correction` to every entry of the last diagonal except its seed.
    pub fn complete(&mut self, correction: &V) {
        if correction.is_null() {
            return;
        }
        let row = self.rows.last_mut().expect("triangle has a diagonal");
        for v in row.iter_mut().skip(1) {
            *v = v.plus(correction);
        }
    }

    /// Replaces `F_{0,d}` of the last diagonal.
    pub fn set_last(&mut self, value: V) {
        let row = self.rows.last_mut().expect("triangle has a diagonal");
        *row.last_mut().expect("nonempty row") = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Series;

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(3, 1), 3);
        assert_eq!(binomial(4, 2), 6);
    }

    #[test]
    fn zero_operator_is_identity() {
        let mut t = Triangle::new(Series::one());
        for d in 1..4 {
            t.extend(Series::one().scale_int(d, 1), false, |_, _, _| {
                Series::zero()
            });
        }
        for m in 0..4 {
            assert_eq!(
                t.get(0, m),
                &Series::one().scale_int(m as i64, 1).add(&if m == 0 {
                    Series::one()
                } else {
                    Series::zero()
                })
            );
        }
    }

    // With L_i(F) = F for i = 1 only, F_{0,m} = Σ_k C(m,k) F_{k,0}: the
    // exponential of a scalar shift.
    #[test]
    fn unit_operator_reproduces_binomial_sums() {
        let seeds = [1i64, 2, 5, 7];
        let mut t = Triangle::new(Series::one().scale_int(seeds[0], 1));
        for &s in &seeds[1..] {
            t.extend(Series::one().scale_int(s, 1), false, |i, _, f| {
                if i == 1 {
                    f.clone()
                } else {
                    Series::zero()
                }
            });
        }
        for m in 0..seeds.len() {
            let expected: i64 = (0..=m).map(|k| binomial(m, k) * seeds[k]).sum();
            assert_eq!(t.get(0, m), &Series::one().scale_int(expected, 1));
        }
    }
}
