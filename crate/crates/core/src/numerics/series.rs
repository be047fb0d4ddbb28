//! Summation: compensated accumulation, power sums, Abel limits and the
//! epsilon algorithm.

use super::{finish, EvalResult, Scalar, SeriesSpec};
use crate::error::{Error, Result};

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T: Scalar = f64> {
    sum: T,
    compensation: T,
}

impl<T: Scalar> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        // Componentwise for complex values: the branch is chosen on the modulus,
        // which is exact for reals and a good proxy otherwise.
        if self.sum.modulus() >= x.modulus() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn sum(&self) -> T {
        self.sum + self.compensation
    }
}

/// Σⱼ term(j)·rʲ for a fixed radius r ∈ (0, 1).
///
/// Summation stops once a run of max(16, 1/(1 − r)) consecutive terms stays
/// below `tol·(1 − r)·max(1, |S|)`; the run is long enough that terms
/// oscillating slowly in j cannot end it at one of their nodes. Reaching
/// `max_terms` first is a non-convergence.
pub fn power_sum<T, F>(term: F, r: f64, spec: &SeriesSpec) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(usize) -> T,
{
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidSpec(format!("radius r = {r} must lie in (0, 1)")));
    }
    power_sum_iter((0..).map(term), r, spec, spec.tol)
}

fn power_sum_iter<T, I>(terms: I, r: f64, spec: &SeriesSpec, tol: f64) -> Result<EvalResult<T>>
where
    T: Scalar,
    I: IntoIterator<Item = T>,
{
    let quiet_run = ((1.0 / (1.0 - r)).ceil() as usize).max(16);
    let mut acc = CompensatedSum::new();
    let mut weight = 1.0;
    let mut quiet = 0usize;
    let mut quiet_max = 0.0f64;
    let mut used = 0usize;
    let mut last = f64::INFINITY;
    for t in terms.into_iter().take(spec.max_terms) {
        let x = t * weight;
        acc.add(x);
        used += 1;
        weight *= r;
        last = x.modulus();
        let threshold = tol * (1.0 - r) * acc.sum().modulus().max(1.0);
        if last < threshold {
            quiet += 1;
            quiet_max = quiet_max.max(last);
            if quiet >= quiet_run {
                let value = acc.sum();
                // Geometric bound on what was dropped, from the envelope of the run.
                let error = quiet_max * r / (1.0 - r);
                return finish("power sum", value, error, used, threshold.max(error));
            }
        } else {
            quiet = 0;
            quiet_max = 0.0;
        }
        if weight == 0.0 {
            break;
        }
    }
    let value = acc.sum();
    if used < spec.max_terms && last.is_finite() {
        // Iterator ended: the sum is exact up to rounding.
        return finish("power sum", value, 0.0, used, 0.0);
    }
    Err(Error::non_convergence(
        "power sum: term budget exhausted",
        value,
        last * r / (1.0 - r),
        used,
    ))
}

/// The inner power sums of an Abel sum run to this fraction of its
/// tolerance, so that their errors, amplified by the extrapolation, stay
/// small against it.
const INNER_TOL_FRACTION: f64 = 0.01;

/// Abel sum of Σ term(j): the limit of Σ term(j)·rʲ as r → 1⁻.
///
/// The power sum is formed at each radius of `spec.abel_radii` and the values
/// are extrapolated to r = 1 by a polynomial in s = 1 − r through the last
/// `extrapolation_depth + 1` radii. The error estimate is the change between
/// the extrapolants of degree `depth` and `depth − 1`, plus the power-sum
/// errors carried through the extrapolation weights.
pub fn abel_sum<T, F>(term: F, spec: &SeriesSpec) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(usize) -> T,
{
    spec.validate()?;
    abel_sum_iter(|| (0..).map(&term), spec)
}

/// [`abel_sum`] for terms that are cheapest to produce in order, such as a
/// three-term recurrence. The iterator is restarted for every radius via the
/// factory closure.
pub fn abel_sum_iter<T, I, G>(make_terms: G, spec: &SeriesSpec) -> Result<EvalResult<T>>
where
    T: Scalar,
    I: IntoIterator<Item = T>,
    G: Fn() -> I,
{
    spec.validate()?;
    let mut s = Vec::with_capacity(spec.abel_radii.len());
    let mut values = Vec::with_capacity(spec.abel_radii.len());
    let mut errors = Vec::with_capacity(spec.abel_radii.len());
    let mut work = 0;
    for &r in &spec.abel_radii {
        let inner = power_sum_iter(make_terms(), r, spec, INNER_TOL_FRACTION * spec.tol)
            .map_err(|e| e.in_context(&format!("Abel sum at r = {r}")))?;
        work += inner.terms_or_nodes_used;
        s.push(1.0 - r);
        values.push(inner.value);
        errors.push(inner.error_estimate);
    }
    extrapolate_abel(&s, &values, &errors, spec, work)
}

/// Σᵢ |wᵢ|·δᵢ for the weights wᵢ = Πⱼ≠ᵢ sⱼ/(sⱼ − sᵢ) of polynomial
/// extrapolation to s = 0.
fn propagated_error(s: &[f64], errors: &[f64]) -> f64 {
    (0..s.len())
        .map(|i| {
            let w: f64 = (0..s.len()).filter(|&j| j != i).map(|j| s[j] / (s[j] - s[i])).product();
            w.abs() * errors[i]
        })
        .sum()
}

fn extrapolate_abel<T: Scalar>(
    s: &[f64],
    values: &[T],
    errors: &[f64],
    spec: &SeriesSpec,
    work: usize,
) -> Result<EvalResult<T>> {
    let m = values.len();
    let depth = spec.extrapolation_depth.min(m - 1);
    let lo = m - depth - 1;
    let value = polynomial_extrapolate_to_zero(&s[lo..], &values[lo..]);
    let truncation = if depth == 0 {
        // No extrapolation: the distance to the previous radius is all we know.
        if m >= 2 {
            (values[m - 1] - values[m - 2]).modulus()
        } else {
            f64::INFINITY
        }
    } else {
        let lower = polynomial_extrapolate_to_zero(&s[lo + 1..], &values[lo + 1..]);
        (value - lower).modulus()
    };
    let error = truncation + propagated_error(&s[lo..], &errors[lo..]);
    finish(
        "Abel sum",
        value,
        error,
        work,
        spec.tol * value.modulus().max(1.0),
    )
}

/// Σⱼ term(j) for positive-index series whose tail has an asymptotic
/// expansion in powers of 1/J (terms smooth in j, decaying algebraically).
///
/// Partial sums are recorded at the strictly increasing `checkpoints` and
/// extrapolated to 1/J = 0 by a polynomial through all of them (Richardson).
/// The error estimate is the change when the smallest checkpoint is dropped.
pub fn richardson_series<F>(term: F, checkpoints: &[usize], tol: f64) -> Result<EvalResult<f64>>
where
    F: Fn(usize) -> f64,
{
    if checkpoints.len() < 2 || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec(
            "Richardson checkpoints must be ≥ 2 strictly increasing positive counts".into(),
        ));
    }
    let mut acc = CompensatedSum::new();
    let mut h = Vec::with_capacity(checkpoints.len());
    let mut sums = Vec::with_capacity(checkpoints.len());
    let mut j = 0;
    for &stop in checkpoints {
        while j < stop {
            acc.add(term(j));
            j += 1;
        }
        h.push(1.0 / stop as f64);
        sums.push(acc.sum());
    }
    let value = polynomial_extrapolate_to_zero(&h, &sums);
    let lower = polynomial_extrapolate_to_zero(&h[1..], &sums[1..]);
    let error = (value - lower).abs();
    finish("Richardson-extrapolated series", value, error, j, tol * value.abs().max(f64::MIN_POSITIVE))
}

/// Value at s = 0 of the interpolating polynomial through (sᵢ, yᵢ), by Neville's scheme.
pub fn polynomial_extrapolate_to_zero<T: Scalar>(s: &[f64], y: &[T]) -> T {
    assert_eq!(s.len(), y.len(), "abscissae and values must pair up");
    assert!(!s.is_empty(), "need at least one point");
    let mut p: Vec<T> = y.to_vec();
    let n = s.len();
    for level in 1..n {
        for i in 0..n - level {
            let (si, sj) = (s[i], s[i + level]);
            // P_{i..j}(0) = (s_j·P_{i..j−1} − s_i·P_{i+1..j}) / (s_j − s_i)
            p[i] = (p[i] * sj - p[i + 1] * si) * (1.0 / (sj - si));
        }
    }
    p[0]
}

/// Limit of a sequence of partial sums by Wynn's epsilon algorithm.
///
/// The full ε-table is built from the given sequence. Every even column is a
/// candidate; its error is the difference of its last two entries, and the
/// candidate with the smallest error wins. Column 0 (the raw sequence)
/// competes too, so an already converged sequence is returned unchanged.
/// The result is marked converged whenever the estimate is finite; callers
/// judge `error_estimate` against their own tolerance.
pub fn accelerate_alternating(partial_sums: &[f64]) -> Result<EvalResult<f64>> {
    if partial_sums.len() < 3 {
        return Err(Error::SequenceTooShort {
            len: partial_sums.len(),
        });
    }
    let (value, error) = wynn_epsilon(partial_sums);
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::non_convergence(
            "epsilon algorithm",
            value,
            error,
            partial_sums.len(),
        ));
    }
    Ok(EvalResult {
        value,
        error_estimate: error,
        terms_or_nodes_used: partial_sums.len(),
        converged: true,
    })
}

pub(crate) fn wynn_epsilon<T: Scalar>(seq: &[T]) -> (T, f64) {
    let n = seq.len();
    let last = seq[n - 1];
    let mut best = (
        last,
        if n >= 2 {
            (last - seq[n - 2]).modulus()
        } else {
            f64::INFINITY
        },
    );
    if best.1 == 0.0 {
        return best;
    }
    let mut older: Vec<T> = vec![T::zero(); n + 1];
    let mut current: Vec<T> = seq.to_vec();
    for column in 1..n {
        let len = current.len() - 1;
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            let diff = current[i + 1] - current[i];
            if diff.modulus() == 0.0 || !diff.is_finite_value() {
                return best;
            }
            next.push(older[i + 1] + T::one() / diff);
        }
        older = current;
        current = next;
        if column % 2 == 0 && current.len() >= 2 {
            let k = current.len();
            let candidate = current[k - 1];
            let error = (candidate - current[k - 2]).modulus();
            if candidate.is_finite_value() && error < best.1 {
                best = (candidate, error);
            }
        }
    }
    best
}
