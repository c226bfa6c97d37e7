//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector integrands.
//!
//! Each component is converged against its own scale, taken as the larger
//! of `|∫f_k|` and `∫|f_k|`, so integrals that cancel to nearly zero do not
//! stall the refinement.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    /// Absolute floor on the per-component error target.
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { rel_tol: 1e-9, abs_tol: 1e-300, max_intervals: 2000 }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    abs_value: Vec<f64>,
    error: Vec<f64>,
}

fn gk15<F>(f: &mut F, a: f64, b: f64, n: usize) -> Result<Segment>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; n];
    let mut gauss = vec![0.0; n];
    let mut absk = vec![0.0; n];
    let mut buf = vec![0.0; n];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for &sgn in pts {
            f(c + sgn * h * x, &mut buf)?;
            for k in 0..n {
                kron[k] += wk * buf[k];
                absk[k] += wk * buf[k].abs();
                if j % 2 == 1 {
                    gauss[k] += WG[j / 2] * buf[k];
                }
            }
        }
    }
    let value: Vec<f64> = kron.iter().map(|v| v * h).collect();
    let error = kron.iter().zip(&gauss).map(|(k, g)| ((k - g) * h).abs()).collect();
    let abs_value = absk.iter().map(|v| v * h.abs()).collect();
    Ok(Segment { a, b, value, abs_value, error })
}

/// Integrates an `n`-component function over `[a, b]`.
pub fn integrate_vec<F>(mut f: F, a: f64, b: f64, n: usize, opts: QuadOptions) -> Result<Vec<f64>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    if a == b {
        return Ok(vec![0.0; n]);
    }
    let mut segs = vec![gk15(&mut f, a, b, n)?];
    loop {
        let total: Vec<f64> = (0..n).map(|k| segs.iter().map(|s| s.value[k]).sum()).collect();
        let abs_total: Vec<f64> = (0..n).map(|k| segs.iter().map(|s| s.abs_value[k]).sum()).collect();
        let err: Vec<f64> = (0..n).map(|k| segs.iter().map(|s| s.error[k]).sum()).collect();
        let target: Vec<f64> =
            (0..n).map(|k| (opts.rel_tol * total[k].abs().max(abs_total[k])).max(opts.abs_tol)).collect();
        if (0..n).all(|k| err[k] <= target[k]) {
            return Ok(total);
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "{} subintervals on [{a}, {b}] without reaching relative tolerance {:e}",
                segs.len(),
                opts.rel_tol
            )));
        }
        // Split the segment contributing the worst normalized error.
        let worst = segs
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let w = (0..n).map(|k| s.error[k] / target[k]).fold(0.0_f64, f64::max);
                (i, w)
            })
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid == s.a || mid == s.b {
            return Err(Error::Quadrature("interval collapsed below machine precision".into()));
        }
        segs.push(gk15(&mut f, s.a, mid, n)?);
        segs.push(gk15(&mut f, mid, s.b, n)?);
    }
}

/// Scalar convenience wrapper.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_vec(
        |x, out| {
            out[0] = f(x);
            Ok(())
        },
        a,
        b,
        1,
        opts,
    )
    .map(|v| v[0])
}

/// Tensor-product integral over a box in up to three dimensions; the
/// integrand fills an `n`-component output at each point.
pub fn integrate_box<F>(f: &F, bounds: &[(f64, f64)], n: usize, opts: QuadOptions) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()>,
{
    let mut point = vec![0.0; bounds.len()];
    nested(f, bounds, 0, &mut point, n, opts)
}

fn nested<F>(
    f: &F,
    bounds: &[(f64, f64)],
    axis: usize,
    point: &mut [f64],
    n: usize,
    opts: QuadOptions,
) -> Result<Vec<f64>>
where
    F: Fn(&[f64], &mut [f64]) -> Result<()>,
{
    let (a, b) = bounds[axis];
    let last = axis + 1 == bounds.len();
    let mut scratch = point.to_vec();
    integrate_vec(
        |x, out| {
            scratch[axis] = x;
            if last {
                f(&scratch, out)
            } else {
                let inner = nested(f, bounds, axis + 1, &mut scratch, n, opts)?;
                out.copy_from_slice(&inner);
                Ok(())
            }
        },
        a,
        b,
        n,
        opts,
    )
}
