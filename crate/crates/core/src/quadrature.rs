//! Globally adaptive Gauss–Kronrod (G10/K21) quadrature for vector-valued
//! integrands, with caller-supplied breakpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{tolerance_floor, Real};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525478380,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Tolerances and the subdivision budget of the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadratureSettings<T> {
    fn default() -> Self {
        Self {
            abs_tol: tolerance_floor(1e-12),
            rel_tol: tolerance_floor(1e-12),
            max_subdivisions: 2000,
        }
    }
}

impl<T: Real> QuadratureSettings<T> {
    /// Same budget, tolerances tightened to `tol` (floored at the type's precision).
    pub fn tightened(self, tol: f64) -> Self {
        let t: T = tolerance_floor(tol);
        Self {
            abs_tol: self.abs_tol.min(t),
            rel_tol: self.rel_tol.min(t),
            ..self
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero()) {
            return Err(Error::InvalidArgument("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult<T, const M: usize> {
    pub value: [T; M],
    /// Summed error estimate, max over components.
    pub error: T,
    pub intervals: usize,
}

struct Panel<T, const M: usize> {
    a: T,
    b: T,
    value: [T; M],
    error: T,
}

impl<T: Real, const M: usize> PartialEq for Panel<T, M> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real, const M: usize> Eq for Panel<T, M> {}
impl<T: Real, const M: usize> PartialOrd for Panel<T, M> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real, const M: usize> Ord for Panel<T, M> {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

fn rescale<T: Real>(err: T, res_asc: T) -> T {
    let err = err.abs();
    if res_asc > T::zero() && err > T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        if scale < T::one() {
            return res_asc * scale;
        }
        return res_asc;
    }
    err
}

fn gk21<T: Real, const M: usize, F>(f: &F, a: T, b: T) -> Panel<T, M>
where
    F: Fn(T) -> [T; M],
{
    let center = T::lit(0.5) * (a + b);
    let half = T::lit(0.5) * (b - a);
    let fc = f(center);
    let mut kron = fc.map(|v| v * T::lit(WGK[10]));
    let mut gauss = [T::zero(); M];
    let mut samples = Vec::with_capacity(21);
    samples.push((T::lit(WGK[10]), fc));
    for j in 0..10 {
        let x = half * T::lit(XGK[j]);
        let f1 = f(center - x);
        let f2 = f(center + x);
        let wk = T::lit(WGK[j]);
        for m in 0..M {
            kron[m] = kron[m] + wk * (f1[m] + f2[m]);
        }
        if j % 2 == 1 {
            let wg = T::lit(WG[j / 2]);
            for m in 0..M {
                gauss[m] = gauss[m] + wg * (f1[m] + f2[m]);
            }
        }
        samples.push((wk, f1));
        samples.push((wk, f2));
    }
    let mut error = T::zero();
    for m in 0..M {
        let mean = kron[m] * T::lit(0.5);
        let asc: T = samples.iter().map(|(w, v)| *w * (v[m] - mean).abs()).sum();
        let e = rescale((kron[m] - gauss[m]) * half, asc * half.abs());
        error = error.max(e);
    }
    Panel {
        a,
        b,
        value: kron.map(|v| v * half),
        error,
    }
}

/// Integrates `f` over `[a, b]`, starting from the panels cut at
/// `breakpoints` (points outside `(a, b)` are ignored) and repeatedly
/// bisecting the panel with the largest error estimate.
///
/// Converges when the summed error is below `max(abs_tol, rel_tol · |I|)` for
/// every component. Panels narrower than a few ulps are not split further.
pub fn integrate<T, const M: usize, F>(
    f: F,
    a: T,
    b: T,
    breakpoints: &[T],
    settings: &QuadratureSettings<T>,
) -> Result<QuadratureResult<T, M>>
where
    T: Real,
    F: Fn(T) -> [T; M],
{
    settings.check()?;
    let mut cuts: Vec<T> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b && x.is_finite())
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap: BinaryHeap<Panel<T, M>> = edges.windows(2).map(|w| gk21(&f, w[0], w[1])).collect();
    let mut frozen: Vec<Panel<T, M>> = Vec::new();
    let mut splits = 0usize;

    loop {
        let (total, err) = totals(heap.iter().chain(frozen.iter()));
        let scale = total.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        let tol = settings.abs_tol.max(settings.rel_tol * scale);
        if err <= tol || heap.is_empty() {
            return Ok(QuadratureResult {
                value: total,
                error: err,
                intervals: heap.len() + frozen.len(),
            });
        }
        if splits >= settings.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                error: err.as_f64(),
                subdivisions: splits,
            });
        }
        let worst = heap.pop().expect("heap non-empty");
        let mid = T::lit(0.5) * (worst.a + worst.b);
        let min_width = T::lit(16.0) * T::epsilon() * worst.a.abs().max(worst.b.abs()).max(T::one());
        if (worst.b - worst.a) <= min_width || mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        heap.push(gk21(&f, worst.a, mid));
        heap.push(gk21(&f, mid, worst.b));
        splits += 1;
    }
}

fn totals<'a, T: Real, const M: usize>(panels: impl Iterator<Item = &'a Panel<T, M>>) -> ([T; M], T) {
    let mut v = [T::zero(); M];
    let mut e = T::zero();
    for p in panels {
        for (acc, &x) in v.iter_mut().zip(&p.value) {
            *acc = *acc + x;
        }
        e = e + p.error;
    }
    (v, e)
}
