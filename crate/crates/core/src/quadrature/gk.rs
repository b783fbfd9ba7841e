//! Globally adaptive Gauss–Kronrod 15/7 quadrature for complex-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

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

/// Integrand evaluations allowed per integral.
pub const EVALUATION_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// True when the error estimate is the rounding floor; splitting cannot help.
    at_floor: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn rule<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        resk += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for (j, (f1, f2)) in values.iter().enumerate() {
        resasc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let resasc = resasc * half.abs();
    let resabs = resabs * half.abs();
    let value = resk * half;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite(format!("integrand on [{a}, {b}]")));
    }
    let mut error = ((resk - resg) * half).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    let at_floor = error <= floor;
    error = error.max(floor);
    Ok(Panel { a, b, value, error, at_floor })
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Integrates `f` over `[a, b]` (split first at `breaks`) until the summed
/// error estimate drops below `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, breaks: &[f64], tol: f64) -> Result<Integral>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut points: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        heap.push(rule(&f, w[0], w[1])?);
        evaluations += 15;
    }
    let mut done: Vec<Panel> = Vec::new();
    let exact_total = |heap: &BinaryHeap<Panel>, done: &[Panel]| -> f64 {
        heap.iter().chain(done.iter()).map(|p| p.error).sum()
    };
    let mut total = exact_total(&heap, &done);
    let mut steps = 0usize;
    loop {
        if total <= tol {
            // guard against drift in the running sum
            total = exact_total(&heap, &done);
        }
        if total <= tol || heap.is_empty() {
            break;
        }
        steps += 1;
        if steps % 512 == 0 {
            total = exact_total(&heap, &done);
        }
        if evaluations + 30 > EVALUATION_BUDGET {
            return Err(Error::NonConvergence { what: "adaptive quadrature", budget: EVALUATION_BUDGET });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.at_floor || !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-13 * (1.0 + worst.a.abs()) {
            done.push(worst);
            continue;
        }
        let left = rule(&f, worst.a, mid)?;
        let right = rule(&f, mid, worst.b)?;
        total += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
    }
    let mut all: Vec<Panel> = heap.into_vec();
    all.extend(done);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = all.iter().map(|p| p.value).sum();
    let error = all.iter().map(|p| p.error).sum();
    Ok(Integral { value, error, panels: all.len() })
}
