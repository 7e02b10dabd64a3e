//! Closed-form values for paths and cycles, used as independent oracles
//! against the chain engine and as fast answers on these families.
//!
//! Path formulas assume the single blue start vertex is `⌈n/2⌉` in 1-based
//! numbering (index `⌈n/2⌉ - 1`), which also minimizes the expected time.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::prob::{check_open_unit, integer, rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathOrCycle {
    Path,
    Cycle,
}

fn need_n_above_two(n: usize) -> Result<()> {
    if n > 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("closed form needs n > 2, got {n}")))
    }
}

fn quarter_pow(k: usize) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(4), k))
}

fn half_n(n: usize) -> Rational {
    rational(n as i64, 2)
}

/// ept(C_n): n/2 + 1/3 for even n, n/2 + 1/2 for odd n.
pub fn ept_cycle(n: usize) -> Result<Rational> {
    need_n_above_two(n)?;
    let extra = if n.is_multiple_of(2) { rational(1, 3) } else { rational(1, 2) };
    Ok(half_n(n) + extra)
}

/// ept(P_n): n/2 + 2/3 for even n, n/2 + 1/2 for odd n.
pub fn ept_path(n: usize) -> Result<Rational> {
    need_n_above_two(n)?;
    let extra = if n.is_multiple_of(2) { rational(2, 3) } else { rational(1, 2) };
    Ok(half_n(n) + extra)
}

/// Probability that C_n is all blue after `rounds` rounds from one vertex.
pub fn lround_cycle(n: usize, rounds: usize) -> Result<Rational> {
    need_n_above_two(n)?;
    if rounds < n / 2 {
        return Ok(Rational::zero());
    }
    Ok(if n.is_multiple_of(2) {
        integer(1) - quarter_pow(rounds - n / 2 + 1)
    } else {
        integer(1) - rational(3, 4) * quarter_pow(rounds - (n - 1) / 2)
    })
}

/// Probability that P_n is all blue after `rounds` rounds from vertex `⌈n/2⌉`.
pub fn lround_path(n: usize, rounds: usize) -> Result<Rational> {
    need_n_above_two(n)?;
    if rounds < n / 2 {
        return Ok(Rational::zero());
    }
    if n % 2 == 1 {
        return lround_cycle(n, rounds);
    }
    Ok(integer(1) - rational(1, 2) * quarter_pow(rounds - n / 2))
}

fn invert(alpha: &Rational, curve: impl Fn(usize) -> Result<Rational>) -> Result<usize> {
    check_open_unit(alpha)?;
    let mut t = 0;
    loop {
        if curve(t)? >= *alpha {
            return Ok(t);
        }
        t += 1;
    }
}

/// Least `t` with `lround_cycle(n, t) >= alpha`.
pub fn confidence_cycle(n: usize, alpha: &Rational) -> Result<usize> {
    need_n_above_two(n)?;
    invert(alpha, |t| lround_cycle(n, t))
}

/// Least `t` with `lround_path(n, t) >= alpha`.
pub fn confidence_path(n: usize, alpha: &Rational) -> Result<usize> {
    need_n_above_two(n)?;
    invert(alpha, |t| lround_path(n, t))
}

/// PSD throttling number of P_n (n >= 2) or C_n (n >= 4):
/// `⌈√(2n) - 1/2⌉`, i.e. the least `m` with `(2m + 1)² >= 8n`.
pub fn psd_throttle_path_cycle(family: PathOrCycle, n: usize) -> Result<usize> {
    let min = match family {
        PathOrCycle::Path => 2,
        PathOrCycle::Cycle => 4,
    };
    if n < min {
        return Err(Error::InvalidArgument(format!("{family:?} PSD throttling formula needs n >= {min}, got {n}")));
    }
    let target = 8 * n as u128;
    let mut m: u128 = 0;
    while (2 * m + 1) * (2 * m + 1) < target {
        m += 1;
    }
    Ok(m as usize)
}
