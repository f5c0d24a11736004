//! Numerical building blocks: adaptive quadrature, root bracketing and
//! embedded Runge-Kutta integration.

pub mod quad;
pub mod roots;
pub mod rk;
