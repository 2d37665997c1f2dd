use num_traits::Zero;

use super::jtau::strata_inverse;
use super::{enum_chart_indices, j_tau, ChartIndex, MCCoords};
use crate::error::{Error, Result};
use crate::exactpoly::Rational;
use crate::grassmann::{Params, ProjPoint};

/// First l=0 chart (in enumeration order) whose strata pivots see the given strata,
/// with the point read off there on the divisor b = 0.
pub fn first_l0_chart_for(par: &Params, strata: &[ProjPoint]) -> Result<(ChartIndex, MCCoords)> {
    for tau in enum_chart_indices(par, 0)? {
        match strata_inverse(par, &tau, strata, Rational::zero()) {
            Ok(c) => return Ok((tau, c)),
            Err(Error::ChartDomain(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ChartDomain("no l=0 chart contains the retracted point".into()))
}

/// The retraction onto D⁻_1 in chart coordinates. On an l=0 chart it zeroes the
/// first lower pivot; otherwise the image is re-expressed in the first l=0 chart that contains it.
pub fn retraction_chart(c: &MCCoords) -> Result<MCCoords> {
    let tau = c.tau();
    if tau.l() == 0 {
        return c.with(tau.pivot_var(1), Rational::zero());
    }
    let m = j_tau(c);
    first_l0_chart_for(c.params(), &m.strata).map(|(_, out)| out)
}
