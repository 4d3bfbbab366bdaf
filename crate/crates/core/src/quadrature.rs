//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

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

const MAX_PANELS: usize = 4_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
/// Returns `(kronrod, |kronrod − gauss|)`.
pub fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<Integral> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Integrate over consecutive panels `[breaks[i], breaks[i+1]]`; the breaks
/// mark kinks or discontinuities the integrand is known to have.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    tol: f64,
) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (value, error) = gauss_kronrod_15(&mut f, a, b);
        total += value;
        total_err += error;
        heap.push(Panel { a, b, value, error });
    }
    let mut panels = heap.len();
    loop {
        if !(total.is_finite() && total_err.is_finite()) {
            return Err(Error::Quadrature {
                achieved: total_err,
                requested: tol,
            });
        }
        let floor = 50.0 * f64::EPSILON * total.abs();
        if total_err <= tol.max(floor) {
            return Ok(Integral {
                value: total,
                abs_error: total_err,
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Ok(Integral {
                    value: total,
                    abs_error: total_err,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if panels >= MAX_PANELS || mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature {
                achieved: total_err,
                requested: tol,
            });
        }
        let (lv, le) = gauss_kronrod_15(&mut f, worst.a, mid);
        let (rv, re) = gauss_kronrod_15(&mut f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        panels += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact_on_one_panel() {
        let (v, _) = gauss_kronrod_15(&mut |x: f64| x.powi(10), 0.0, 2.0);
        assert!((v - 2f64.powi(11) / 11.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_integrals() {
        let r = integrate(|x: f64| (-x * x).exp(), 0.0, 5.0, 1e-13).unwrap();
        let expected = 0.5 * std::f64::consts::PI.sqrt() * 0.999_999_999_998_462_5;
        assert!((r.value - expected).abs() < 1e-12);
        let r = integrate(f64::sqrt, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn kink_with_breaks() {
        let r = integrate_with_breaks(|x: f64| (x - 0.3).abs(), &[0.0, 0.3, 1.0], 1e-14).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn reports_non_convergence() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
