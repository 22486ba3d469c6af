//! Bracketed root finding for monotone increasing functions.
//!
//! Every inverse that has no closed form (monotone cubics, isotopy slices,
//! image curves) goes through [`solve_increasing`]. The functions involved are
//! piecewise linear or piecewise cubic, so regula falsi with the Illinois
//! modification usually lands on the root in one or two steps; a bisection
//! step is forced whenever the bracket stops shrinking fast enough.

use crate::error::Result;

const MAX_ITERATIONS: usize = 200;

/// Solves `f(x) = target` for an increasing `f` on a bracket.
///
/// The bracket is widened by `step` until it encloses the target, then
/// refined until the residual or the bracket width reaches rounding level.
pub(crate) fn solve_increasing<F>(mut f: F, target: f64, guess: f64, step: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut lo = guess;
    let mut flo = f(lo)?;
    if flo == target {
        return Ok(lo);
    }
    let mut hi;
    let mut fhi;
    if flo < target {
        hi = lo + step;
        fhi = f(hi)?;
        let mut widen = step;
        while fhi < target {
            lo = hi;
            flo = fhi;
            widen *= 2.0;
            hi = lo + widen;
            fhi = f(hi)?;
            if !hi.is_finite() {
                return Err(crate::Error::NonFinite);
            }
        }
    } else {
        hi = lo;
        fhi = flo;
        lo = hi - step;
        flo = f(lo)?;
        let mut widen = step;
        while flo > target {
            hi = lo;
            fhi = flo;
            widen *= 2.0;
            lo = hi - widen;
            flo = f(lo)?;
            if !lo.is_finite() {
                return Err(crate::Error::NonFinite);
            }
        }
    }
    refine(f, target, lo, flo, hi, fhi)
}

/// Refines a bracket `[lo, hi]` with `f(lo) <= target <= f(hi)`.
pub(crate) fn refine<F>(
    mut f: F,
    target: f64,
    mut lo: f64,
    mut flo: f64,
    mut hi: f64,
    mut fhi: f64,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if flo == target {
        return Ok(lo);
    }
    if fhi == target {
        return Ok(hi);
    }
    // Illinois bookkeeping: which side was retained last time.
    let mut side = 0i8;
    let mut last_width = hi - lo;
    for iteration in 0..MAX_ITERATIONS {
        let width = hi - lo;
        if width <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        let glo = flo - target;
        let ghi = fhi - target;
        let mut x = if ghi > glo {
            lo - glo * (hi - lo) / (ghi - glo)
        } else {
            0.5 * (lo + hi)
        };
        // Force bisection when regula falsi stalls.
        if iteration % 4 == 3 && width > 0.5 * last_width {
            x = 0.5 * (lo + hi);
        }
        if iteration % 4 == 3 {
            last_width = width;
        }
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
            if !(x > lo && x < hi) {
                break;
            }
        }
        let fx = f(x)?;
        let gx = fx - target;
        if gx == 0.0 || gx.abs() <= f64::EPSILON * target.abs().max(1e-300) {
            return Ok(x);
        }
        if gx < 0.0 {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi = target + 0.5 * (fhi - target);
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo = target + 0.5 * (flo - target);
            }
            side = 1;
        }
    }
    // `flo`/`fhi` may carry Illinois scaling; pick by bracket position only.
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_piecewise_linear_in_few_steps() {
        let mut calls = 0;
        let f = |x: f64| {
            calls += 1;
            Ok(if x < 1.0 { 2.0 * x } else { 2.0 + 0.5 * (x - 1.0) })
        };
        let x = solve_increasing(f, 2.25, 0.0, 1.0).unwrap();
        assert!((x - 1.5).abs() < 1e-14);
        assert!(calls < 40, "{calls} evaluations");
    }

    #[test]
    fn widens_bracket_downward() {
        let x = solve_increasing(|x: f64| Ok(x.powi(3) + x), -30.0, 5.0, 0.5).unwrap();
        assert!((x.powi(3) + x + 30.0).abs() < 1e-10);
    }

    #[test]
    fn exact_guess_is_returned() {
        assert_eq!(solve_increasing(|x: f64| Ok(x), 3.0, 3.0, 1.0).unwrap(), 3.0);
    }
}
