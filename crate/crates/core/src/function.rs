use num_complex::Complex64;

use crate::error::Result;
use crate::geometry::Point;

/// Anything that can be evaluated at interior points of the ball.
///
/// Implemented by [`Symbol`](crate::symbols::Symbol) and by every closure
/// `Fn(&Point) -> Result<Complex64>`.
pub trait BallFunction: Sync {
    fn eval(&self, z: &Point) -> Result<Complex64>;
}

impl<F> BallFunction for F
where
    F: Fn(&Point) -> Result<Complex64> + Sync,
{
    fn eval(&self, z: &Point) -> Result<Complex64> {
        self(z)
    }
}
