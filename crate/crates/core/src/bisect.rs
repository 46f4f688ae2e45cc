//! Threshold search for non-decreasing concave piecewise-affine functions,
//! which is the shape of capacity along any single resource.
//!
//! Plain bisection narrows a bracket `f(lo) < target <= f(hi)`. Each step
//! also extends the chord through the two most recent left points: by
//! concavity that line never lies below `f` to the right of them, so where it
//! reaches `target` is a lower bound on the root, and if `f` already meets
//! `target` there it is the root itself, found exactly.

use crate::error::Result;
use crate::rational::{pow2_inv, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisectionOptions {
    /// Bracket width at which the search stops without an exact root.
    pub tolerance: Rational,
    pub max_iterations: usize,
}

impl Default for BisectionOptions {
    fn default() -> Self {
        Self { tolerance: pow2_inv(40), max_iterations: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    /// Smallest feasible point if `exact`, otherwise the feasible end of a
    /// bracket no wider than the tolerance.
    pub value: Rational,
    pub exact: bool,
    pub lower: Rational,
    pub upper: Rational,
    pub iterations: usize,
}

/// Smallest `x` in `[lo, hi]` with `f(x) >= target`, or `None` when even
/// `f(hi)` falls short.
pub fn invert_concave<F>(
    mut f: F,
    target: &Rational,
    lo: Rational,
    hi: Rational,
    opts: &BisectionOptions,
) -> Result<Option<Threshold>>
where
    F: FnMut(&Rational) -> Result<Rational>,
{
    assert!(lo <= hi, "empty bracket");
    let mut f_lo = f(&lo)?;
    if f_lo >= *target {
        return Ok(Some(Threshold { value: lo.clone(), exact: true, lower: lo.clone(), upper: lo, iterations: 0 }));
    }
    if f(&hi)? < *target {
        return Ok(None);
    }

    let (mut lo, mut hi) = (lo, hi);
    let mut prev: Option<(Rational, Rational)> = None;
    let two = Rational::from_integer(2.into());
    for iteration in 1..=opts.max_iterations {
        if let Some((x_prev, f_prev)) = &prev {
            if f_lo > *f_prev {
                let guess = &lo + (target - &f_lo) * (&lo - x_prev) / (&f_lo - f_prev);
                if guess > lo && guess <= hi {
                    let f_guess = f(&guess)?;
                    if f_guess >= *target {
                        return Ok(Some(Threshold {
                            value: guess.clone(),
                            exact: true,
                            lower: guess.clone(),
                            upper: guess,
                            iterations: iteration,
                        }));
                    }
                    prev = Some((std::mem::replace(&mut lo, guess), std::mem::replace(&mut f_lo, f_guess)));
                }
            }
        }
        if &hi - &lo <= opts.tolerance {
            return Ok(Some(Threshold {
                value: hi.clone(),
                exact: false,
                lower: lo,
                upper: hi,
                iterations: iteration,
            }));
        }
        let mid = (&lo + &hi) / &two;
        let f_mid = f(&mid)?;
        if f_mid >= *target {
            hi = mid;
        } else {
            prev = Some((std::mem::replace(&mut lo, mid), std::mem::replace(&mut f_lo, f_mid)));
        }
    }
    Ok(Some(Threshold { value: hi.clone(), exact: false, lower: lo, upper: hi, iterations: opts.max_iterations }))
}
