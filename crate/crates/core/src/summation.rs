//! Compensated accumulation and certified truncation of geometric-type series.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Majorant `(base + slope * (j + offset)) * rho^(j + offset)` for the
/// magnitude of a quantity indexed by `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Envelope {
    pub base: f64,
    pub slope: f64,
    pub offset: usize,
}

impl Envelope {
    pub fn new(base: f64, slope: f64, offset: usize) -> Self {
        Envelope { base, slope, offset }
    }

    #[inline]
    fn poly(&self, j: usize) -> f64 {
        self.base + self.slope * (j + self.offset) as f64
    }
}

/// `coeff * prod_k envelope_k(j)^power_k`; a majorant for one family of
/// series terms.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TailTerm {
    pub coeff: f64,
    pub factors: Vec<(Envelope, f64)>,
}

impl TailTerm {
    pub fn new(coeff: f64, factors: Vec<(Envelope, f64)>) -> Self {
        TailTerm { coeff, factors }
    }

    fn value(&self, rho: f64, j: usize) -> f64 {
        let mut v = self.coeff;
        for (e, p) in &self.factors {
            let poly = e.poly(j);
            if poly == 0.0 {
                return 0.0;
            }
            v *= poly.powf(*p) * rho.powf(*p * (j + e.offset) as f64);
        }
        v
    }

    /// Upper bound on `term(i + 1) / term(i)` valid for every `i >= j`;
    /// the polynomial ratios decrease in `i`.
    fn ratio_bound(&self, rho: f64, j: usize) -> f64 {
        let mut q = 1.0;
        for (e, p) in &self.factors {
            let (now, next) = (e.poly(j), e.poly(j + 1));
            let poly_ratio = if now > 0.0 { next / now } else { 1.0 };
            q *= (poly_ratio * rho).powf(*p);
        }
        q
    }

    /// Bound on `sum_{i >= j} term(i)`, or `None` if the geometric
    /// domination does not hold from `j` on yet.
    fn tail_from(&self, rho: f64, j: usize) -> Option<f64> {
        if self.coeff == 0.0 {
            return Some(0.0);
        }
        let v = self.value(rho, j);
        if v == 0.0 {
            return Some(0.0);
        }
        let q = self.ratio_bound(rho, j);
        (q < 1.0).then(|| v / (1.0 - q))
    }
}

fn total_tail(terms: &[TailTerm], rho: f64, j: usize) -> f64 {
    let mut total = 0.0;
    for t in terms {
        match t.tail_from(rho, j) {
            Some(v) => total += v,
            None => return f64::INFINITY,
        }
    }
    total
}

/// Smallest `J` (up to the doubling/bisection search) such that the summed
/// tail bound from `J` on is below `tol`. Returns `(J, bound)`.
pub(crate) fn truncation_index(
    terms: &[TailTerm],
    rho: f64,
    tol: f64,
    max_terms: usize,
) -> Option<(usize, f64)> {
    debug_assert!(rho > 0.0 && rho < 1.0);
    let mut hi = 1usize;
    while total_tail(terms, rho, hi) >= tol {
        if hi >= max_terms {
            return None;
        }
        hi = (hi * 2).min(max_terms);
    }
    let mut lo = hi / 2;
    if lo == 0 || total_tail(terms, rho, lo) < tol {
        if total_tail(terms, rho, 0) < tol {
            return Some((0, total_tail(terms, rho, 0)));
        }
        lo = 0;
    }
    // invariant: tail(lo) >= tol > tail(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if total_tail(terms, rho, mid) < tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some((hi, total_tail(terms, rho, hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn geometric_tail_is_certified() {
        // sum_{j>=J} 0.5^j = 2 * 0.5^J
        let terms = [TailTerm::new(1.0, vec![(Envelope::new(1.0, 0.0, 0), 1.0)])];
        let (j, bound) = truncation_index(&terms, 0.5, 1e-6, 1 << 20).unwrap();
        let exact = 2.0 * 0.5f64.powi(j as i32);
        assert!(bound >= exact * (1.0 - 1e-12) && bound < 1e-6);
        assert!(2.0 * 0.5f64.powi(j as i32 - 1) >= 1e-6);
    }

    #[test]
    fn polynomial_growth_tail_is_an_upper_bound() {
        // terms (1 + 3j)^1.5 * 0.9^(1.5 j)
        let terms = [TailTerm::new(2.0, vec![(Envelope::new(1.0, 3.0, 0), 1.5)])];
        let (j, bound) = truncation_index(&terms, 0.9, 1e-10, 1 << 20).unwrap();
        let brute: f64 = (j..j + 20_000)
            .map(|i| 2.0 * (1.0 + 3.0 * i as f64).powf(1.5) * 0.9f64.powf(1.5 * i as f64))
            .sum();
        assert!(brute <= bound && bound < 1e-10, "{brute} {bound}");
    }

    #[test]
    fn impossible_tolerance_reports_failure() {
        let terms = [TailTerm::new(1.0, vec![(Envelope::new(1.0, 0.0, 0), 1.0)])];
        assert!(truncation_index(&terms, 0.999, 1e-300, 64).is_none());
    }
}
