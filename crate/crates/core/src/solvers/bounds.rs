//! Approximation-ratio parameters of an instance.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::scalar::Rate;
use crate::solvers::common::CandidatePools;

/// `H(n) = 1 + 1/2 + ... + 1/n`, exactly.
pub fn harmonic(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("harmonic number of 0"));
    }
    Ok((1..=n).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::from(1), BigInt::from(i))
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams<R> {
    /// Largest coverage set.
    pub d_star: usize,
    /// `H(d_star)`; zero when no camera covers anything.
    pub h_d_star: BigRational,
    /// Best and worst robust rate over all usable candidates.
    pub r_max: R,
    pub r_min: R,
}

impl<R: Rate> BoundParams<R> {
    /// `r_max / r_min`, exactly.
    pub fn rate_ratio(&self) -> Result<BigRational> {
        let hi = self.r_max.to_rational();
        let lo = self.r_min.to_rational();
        match (hi, lo) {
            (Some(hi), Some(lo)) if !lo.is_zero() => Ok(hi / lo),
            _ => Err(Error::invalid("rates are not finite and positive")),
        }
    }

    /// `H(d_star) * z`, the greedy-phase guarantee against the relaxed optimum.
    pub fn greedy_bound(&self, z: usize) -> BigRational {
        &self.h_d_star * BigRational::from_integer(BigInt::from(z))
    }

    /// `(r_max / r_min) * H(d_star) * z`, the guarantee after relocation.
    pub fn relocation_bound(&self, z: usize) -> Result<BigRational> {
        Ok(self.rate_ratio()? * self.greedy_bound(z))
    }

    pub fn relocation_bound_f64(&self, z: usize) -> Result<f64> {
        self.relocation_bound(z)?
            .to_f64()
            .ok_or_else(|| Error::invalid("bound not representable"))
    }
}

/// Returns an error if no camera has a usable candidate.
pub fn bound_params<R: Rate>(scenario: &Scenario<R>) -> Result<BoundParams<R>> {
    let pools = CandidatePools::build(scenario)?;
    let mut rates = pools.iter().flat_map(|(_, p)| p.iter().map(|a| a.robust_rate));
    let first = rates
        .next()
        .ok_or_else(|| Error::invalid("no camera has a usable allocation"))?;
    let (r_min, r_max) = rates.fold((first, first), |(lo, hi), r| (lo.min_rate(r), hi.max_rate(r)));
    let d_star = scenario.cameras.iter().map(|c| c.coverage.len()).max().unwrap_or(0);
    let h_d_star = if d_star == 0 {
        BigRational::zero()
    } else {
        harmonic(d_star)?
    };
    Ok(BoundParams {
        d_star,
        h_d_star,
        r_max,
        r_min,
    })
}
