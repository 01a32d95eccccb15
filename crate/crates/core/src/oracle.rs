//! Ground truth: brute-force lattice point counting, exact interpolation,
//! Dedekind sums, and reciprocity checks.
//!
//! The counting here is intentionally naive — bounding-box enumeration with
//! exact facet-inequality membership tests — so it can serve as an
//! independent referee for the formula engine. Intended scale is dimension
//! at most 4 with small coordinates and dilations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlat::Rational;
use crate::simplex::Simplex;

/// Lattice point counts per dilation factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub interior: bool,
    pub counts: BTreeMap<u64, BigInt>,
}

impl CountTable {
    pub fn get(&self, mu: u64) -> Option<&BigInt> {
        self.counts.get(&mu)
    }
}

/// Counts lattice points of the `mu`-fold dilation, closed or strictly
/// interior. Exact integer arithmetic throughout; a 64-bit fast path is used
/// when every intermediate provably fits.
pub fn count_points(simplex: &Simplex, mu: u64, interior: bool) -> BigInt {
    let n = simplex.dim();
    let mu_big = BigInt::from(mu);
    let mut lo = vec![BigInt::zero(); n];
    let mut hi = vec![BigInt::zero(); n];
    for (i, v) in simplex.vertices().iter().enumerate() {
        for j in 0..n {
            let c = &mu_big * &v[j];
            if i == 0 {
                lo[j] = c.clone();
                hi[j] = c;
            } else {
                if c < lo[j] {
                    lo[j] = c.clone();
                }
                if c > hi[j] {
                    hi[j] = c;
                }
            }
        }
    }
    let facets: Vec<(Vec<BigInt>, BigInt)> = (0..=n)
        .map(|j| {
            let fd = simplex.facet(j);
            (fd.normal.clone(), &mu_big * &fd.offset)
        })
        .collect();
    if let Some(count) = count_fast(&lo, &hi, &facets, interior) {
        return count;
    }
    count_big(&lo, &hi, &facets, interior)
}

/// i64/i128 fast path; `None` when any input is too large to be provably
/// overflow-free.
fn count_fast(
    lo: &[BigInt],
    hi: &[BigInt],
    facets: &[(Vec<BigInt>, BigInt)],
    interior: bool,
) -> Option<BigInt> {
    const LIMIT: i64 = 1 << 40;
    let small = |x: &BigInt| -> Option<i64> {
        let v = x.to_i64()?;
        (v.abs() < LIMIT).then_some(v)
    };
    let lo: Vec<i64> = lo.iter().map(&small).collect::<Option<_>>()?;
    let hi: Vec<i64> = hi.iter().map(&small).collect::<Option<_>>()?;
    let facets: Vec<(Vec<i64>, i64)> = facets
        .iter()
        .map(|(nrm, off)| {
            let nrm: Option<Vec<i64>> = nrm.iter().map(&small).collect();
            Some((nrm?, small(off)?))
        })
        .collect::<Option<_>>()?;
    let n = lo.len();
    let mut point = lo.clone();
    let mut count: u64 = 0;
    'outer: loop {
        let ok = facets.iter().all(|(nrm, off)| {
            let dot: i128 = nrm
                .iter()
                .zip(&point)
                .map(|(&a, &b)| a as i128 * b as i128)
                .sum();
            if interior {
                dot > *off as i128
            } else {
                dot >= *off as i128
            }
        });
        if ok {
            count += 1;
        }
        for j in (0..n).rev() {
            if point[j] < hi[j] {
                point[j] += 1;
                for (jj, p) in point.iter_mut().enumerate().skip(j + 1) {
                    *p = lo[jj];
                }
                continue 'outer;
            }
        }
        break;
    }
    Some(BigInt::from(count))
}

fn count_big(
    lo: &[BigInt],
    hi: &[BigInt],
    facets: &[(Vec<BigInt>, BigInt)],
    interior: bool,
) -> BigInt {
    let n = lo.len();
    let mut point: Vec<BigInt> = lo.to_vec();
    let mut count = BigInt::zero();
    'outer: loop {
        let ok = facets.iter().all(|(nrm, off)| {
            let dot: BigInt = nrm.iter().zip(&point).map(|(a, b)| a * b).sum();
            if interior {
                dot > *off
            } else {
                dot >= *off
            }
        });
        if ok {
            count += 1;
        }
        for j in (0..n).rev() {
            if point[j] < hi[j] {
                point[j] += 1;
                for (jj, p) in point.iter_mut().enumerate().skip(j + 1) {
                    *p = lo[jj].clone();
                }
                continue 'outer;
            }
        }
        break;
    }
    count
}

/// Closed or interior counts for dilations `0..=mu_max`.
pub fn count_table(simplex: &Simplex, mu_max: u64, interior: bool) -> CountTable {
    let counts = (0..=mu_max)
        .map(|mu| (mu, count_points(simplex, mu, interior)))
        .collect();
    CountTable { interior, counts }
}

/// Polynomial with exact rational coefficients, ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        RatPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from(BigInt::from(x)))
    }
}

/// The unique interpolating polynomial through `(mu, counts[mu])` for
/// `mu = 0..=n`, exact Lagrange interpolation.
pub fn interpolate(counts: &CountTable, n: usize) -> RatPoly {
    let points: Vec<(i64, Rational)> = (0..=n as u64)
        .map(|mu| {
            let y = counts
                .get(mu)
                .unwrap_or_else(|| panic!("count table is missing dilation {}", mu));
            (mu as i64, Rational::from(y.clone()))
        })
        .collect();
    let mut total = vec![Rational::zero(); n + 1];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Basis polynomial ∏_{j≠i} (x - x_j)/(x_i - x_j).
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            let shift = Rational::from(BigInt::from(-xj));
            for (d, c) in basis.iter().enumerate() {
                next[d] += c * &shift;
                next[d + 1] += c;
            }
            basis = next;
            denom *= Rational::from(BigInt::from(xi - xj));
        }
        let w = yi / denom;
        for (d, c) in basis.iter().enumerate() {
            total[d] += c * &w;
        }
    }
    RatPoly::new(total)
}

/// Classical Dedekind sum `s(h, k) = Σ ((i/k)) ((hi/k))`.
pub fn dedekind_sum(h: u64, k: u64) -> Result<Rational> {
    if k == 0 || BigInt::from(h).gcd(&BigInt::from(k)) != BigInt::one() {
        return Err(Error::NotCoprime);
    }
    let mut acc = Rational::zero();
    for i in 1..k {
        acc += sawtooth(&Rational::new(BigInt::from(i), BigInt::from(k)))
            * sawtooth(&Rational::new(BigInt::from(h * i), BigInt::from(k)));
    }
    Ok(acc)
}

/// Sawtooth `((x))`: `x - floor(x) - 1/2` off the integers, 0 on them.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::zero();
    }
    x - x.floor() - Rational::new(BigInt::one(), BigInt::from(2))
}

/// One dilation's worth of reciprocity evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityEntry {
    pub mu: u64,
    /// `ℓ(-mu)` from the interpolated polynomial.
    pub negated_value: Rational,
    /// Interior count at `mu`.
    pub interior_count: BigInt,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityReport {
    pub entries: Vec<ReciprocityEntry>,
    pub pass: bool,
}

/// Checks `ℓ(-μ) = (-1)^n · interior_count(μ)` for `μ = 1..=mu_max`, with
/// `ℓ` interpolated from closed counts.
pub fn reciprocity_check(simplex: &Simplex, mu_max: u64) -> ReciprocityReport {
    let n = simplex.dim();
    let closed = count_table(simplex, n as u64, false);
    let poly = interpolate(&closed, n);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mut entries = Vec::new();
    let mut pass = true;
    for mu in 1..=mu_max {
        let lhs = poly.eval_int(-(mu as i64));
        let interior_count = count_points(simplex, mu, true);
        let rhs = Rational::from(&interior_count * BigInt::from(sign));
        let ok = lhs == rhs;
        pass &= ok;
        entries.push(ReciprocityEntry {
            mu,
            negated_value: lhs,
            interior_count,
            ok,
        });
    }
    ReciprocityReport { entries, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::Simplex;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn standard2() -> Simplex {
        Simplex::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap()
    }

    fn reeve(r: i64) -> Simplex {
        Simplex::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, r]]).unwrap()
    }

    #[test]
    fn standard_triangle_counts() {
        let s = standard2();
        assert_eq!(count_points(&s, 1, false), BigInt::from(3));
        assert_eq!(count_points(&s, 2, false), BigInt::from(6));
        assert_eq!(count_points(&s, 0, false), BigInt::from(1));
        assert_eq!(count_points(&s, 1, true), BigInt::from(0));
        assert_eq!(count_points(&s, 3, true), BigInt::from(1));
    }

    #[test]
    fn segment_counts() {
        let s = Simplex::from_i64(&[&[0], &[5]]).unwrap();
        assert_eq!(count_points(&s, 1, false), BigInt::from(6));
        assert_eq!(count_points(&s, 2, false), BigInt::from(11));
        assert_eq!(count_points(&s, 1, true), BigInt::from(4));
    }

    #[test]
    fn reeve_counts() {
        let s = reeve(3);
        assert_eq!(count_points(&s, 1, false), BigInt::from(4));
        assert_eq!(count_points(&s, 1, true), BigInt::from(0));
        let s5 = reeve(5);
        assert_eq!(count_points(&s5, 1, false), BigInt::from(4));
    }

    #[test]
    fn negative_coordinates_are_fine() {
        let s = Simplex::from_i64(&[&[-2, -1], &[3, -1], &[-2, 4]]).unwrap();
        let direct = count_points(&s, 1, false);
        // Translate to the positive quadrant; count must be unchanged.
        let t = Simplex::from_i64(&[&[0, 0], &[5, 0], &[0, 5]]).unwrap();
        assert_eq!(direct, count_points(&t, 1, false));
    }

    #[test]
    fn interpolate_examples() {
        let mut counts = BTreeMap::new();
        counts.insert(0u64, BigInt::from(1));
        counts.insert(1, BigInt::from(3));
        counts.insert(2, BigInt::from(6));
        let table = CountTable {
            interior: false,
            counts,
        };
        let poly = interpolate(&table, 2);
        assert_eq!(poly.coeffs(), &[rat(1, 1), rat(3, 2), rat(1, 2)]);

        let mut seg = BTreeMap::new();
        seg.insert(0u64, BigInt::from(1));
        seg.insert(1, BigInt::from(8));
        let table = CountTable {
            interior: false,
            counts: seg,
        };
        let poly = interpolate(&table, 1);
        assert_eq!(poly.coeffs(), &[rat(1, 1), rat(7, 1)]);

        let mut constant = BTreeMap::new();
        constant.insert(0u64, BigInt::from(1));
        let table = CountTable {
            interior: false,
            counts: constant,
        };
        assert_eq!(interpolate(&table, 0).coeffs(), &[rat(1, 1)]);
    }

    #[test]
    fn interpolation_extrapolates_counts() {
        for s in [standard2(), reeve(2), reeve(4)] {
            let n = s.dim();
            let table = count_table(&s, n as u64, false);
            let poly = interpolate(&table, n);
            for extra in [n as u64 + 1, n as u64 + 2] {
                assert_eq!(
                    poly.eval_int(extra as i64),
                    Rational::from(count_points(&s, extra, false)),
                    "extrapolation at {} for dim {}",
                    extra,
                    n
                );
            }
        }
    }

    #[test]
    fn dedekind_examples() {
        assert_eq!(dedekind_sum(1, 2).unwrap(), rat(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap(), rat(1, 18));
        assert_eq!(dedekind_sum(2, 4), Err(Error::NotCoprime));
        assert_eq!(dedekind_sum(1, 0), Err(Error::NotCoprime));
    }

    #[test]
    fn dedekind_closed_form_for_unit_numerator() {
        for k in 2..=50u64 {
            let expected = Rational::new(
                BigInt::from((k - 1) * (k.saturating_sub(2))),
                BigInt::from(12 * k),
            );
            assert_eq!(dedekind_sum(1, k).unwrap(), expected, "k = {}", k);
        }
    }

    #[test]
    fn dedekind_reciprocity_three_five() {
        let lhs = dedekind_sum(3, 5).unwrap() + dedekind_sum(5, 3).unwrap();
        let rhs = rat(-1, 4)
            + (rat(3, 5) + rat(5, 3) + rat(1, 15)) * rat(1, 12);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reciprocity_standard_triangle() {
        let report = reciprocity_check(&standard2(), 3);
        assert!(report.pass);
        assert_eq!(report.entries[0].negated_value, rat(0, 1));
    }

    #[test]
    fn reciprocity_segment_and_reeve() {
        let seg = Simplex::from_i64(&[&[0], &[4]]).unwrap();
        assert!(reciprocity_check(&seg, 3).pass);
        assert!(reciprocity_check(&reeve(3), 2).pass);
    }

    #[test]
    fn counts_nondecreasing_in_dilation() {
        let s = reeve(4);
        let table = count_table(&s, 4, false);
        let values: Vec<&BigInt> = table.counts.values().collect();
        for w in values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }
}
