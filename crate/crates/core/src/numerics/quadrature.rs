//! Globally adaptive 7/15-point Gauss–Kronrod quadrature with bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{finish, EvalResult, QuadratureSpec, Scalar};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Which endpoints carry an integrable singularity.
///
/// A flagged endpoint is removed by the substitution x = a + (b − a)t²
/// (or its mirror at b), which turns x^{−1/2} and log-type behaviour into
/// something the Kronrod rule resolves without excessive bisection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointSingularity {
    #[default]
    None,
    Left,
    Right,
    Both,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    seq: usize,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    // Largest error first; ties broken by creation order for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

fn kronrod15<T: Scalar, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Result<(T, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<T> {
        let v = f(x);
        if v.is_finite_value() {
            Ok(v)
        } else {
            Err(Error::DomainError(format!("integrand is not finite at x = {x}")))
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = WGK[7] * fc.modulus();
    let mut values = [(T::zero(), T::zero()); 7];
    for (j, xk) in XGK.iter().take(7).enumerate() {
        let dx = half * xk;
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        values[j] = (f1, f2);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.modulus() + f2.modulus());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).modulus();
    for (j, (f1, f2)) in values.iter().enumerate() {
        resasc += WGK[j] * ((*f1 - mean).modulus() + (*f2 - mean).modulus());
    }
    let scale = half.abs();
    let err = rescale_error(
        ((kronrod - gauss) * scale).modulus(),
        resabs * scale,
        resasc * scale,
    );
    Ok((kronrod * half, err))
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over [a, b].
///
/// The subinterval with the largest error estimate is bisected until the
/// summed estimate is below `max(abs_tol, rel_tol·|I|)` or the
/// `max_subdivisions` budget runs out.
pub fn integrate_adaptive<T, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    adaptive_with_floor(f, a, b, spec, 0.0)
}

/// Adaptive rule whose tolerance is `max(floor, abs_tol, rel_tol·|I|)`.
///
/// Composite integrators pass a floor tied to the magnitude of the whole
/// integral so that pieces which nearly cancel are not refined forever.
pub(crate) fn adaptive_with_floor<T, F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    floor: f64,
) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b });
    }
    spec.validate()?;

    let (v0, e0) = kronrod15(&f, a, b)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment<T>> = Vec::new();
    let mut seq = 0usize;
    heap.push(Segment { a, b, value: v0, error: e0, seq });

    let mut total = v0;
    let mut total_err = e0;
    let mut splits = 0usize;

    loop {
        if total_err <= spec.tolerance_for(total.modulus()).max(floor) {
            break;
        }
        if splits >= spec.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // Interval too narrow to bisect in floating point.
        if !(worst.a < mid && mid < worst.b) || (worst.b - worst.a) < 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            frozen.push(worst);
            continue;
        }
        let (vl, el) = kronrod15(&f, worst.a, mid)?;
        let (vr, er) = kronrod15(&f, mid, worst.b)?;
        evaluations += 30;
        splits += 1;
        total = total - worst.value + vl + vr;
        total_err = total_err - worst.error + el + er;
        seq += 1;
        heap.push(Segment { a: worst.a, b: mid, value: vl, error: el, seq });
        seq += 1;
        heap.push(Segment { a: mid, b: worst.b, value: vr, error: er, seq });
    }

    // Resum in interval order so the result does not depend on update history.
    let mut segments: Vec<Segment<T>> = heap.into_vec();
    segments.extend(frozen);
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = super::CompensatedSum::new();
    let mut error = 0.0;
    for s in &segments {
        value.add(s.value);
        error += s.error;
    }
    let value = value.sum();
    finish(
        "adaptive quadrature",
        value,
        error,
        evaluations,
        spec.tolerance_for(value.modulus()).max(floor),
    )
}

/// [`integrate_adaptive`] with declared integrable endpoint singularities.
pub fn integrate_adaptive_singular<T, F>(
    f: F,
    a: f64,
    b: f64,
    singularity: EndpointSingularity,
    spec: &QuadratureSpec,
) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    singular_with_floor(f, a, b, singularity, spec, 0.0)
}

pub(crate) fn singular_with_floor<T, F>(
    f: F,
    a: f64,
    b: f64,
    singularity: EndpointSingularity,
    spec: &QuadratureSpec,
    floor: f64,
) -> Result<EvalResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidInterval { a, b });
    }
    let width = b - a;
    match singularity {
        EndpointSingularity::None => adaptive_with_floor(f, a, b, spec, floor),
        EndpointSingularity::Left => adaptive_with_floor(
            |t: f64| f(a + width * t * t) * (2.0 * width * t),
            0.0,
            1.0,
            spec,
            floor,
        ),
        EndpointSingularity::Right => adaptive_with_floor(
            |t: f64| f(b - width * t * t) * (2.0 * width * t),
            0.0,
            1.0,
            spec,
            floor,
        ),
        EndpointSingularity::Both => {
            let half = 0.5 * width;
            let left = adaptive_with_floor(
                |t: f64| f(a + half * t * t) * (2.0 * half * t),
                0.0,
                1.0,
                spec,
                floor,
            )?;
            let right = adaptive_with_floor(
                |t: f64| f(b - half * t * t) * (2.0 * half * t),
                0.0,
                1.0,
                spec,
                floor,
            )?;
            let value = left.value + right.value;
            let error = left.error_estimate + right.error_estimate;
            finish(
                "adaptive quadrature",
                value,
                error,
                left.terms_or_nodes_used + right.terms_or_nodes_used,
                spec.tolerance_for(value.modulus()).max(floor).max(error),
            )
        }
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on Pₙ.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
