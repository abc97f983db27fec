//! Shared numerical building blocks: quadrature rules, root finding,
//! small dense least squares, simplex search.

pub mod gauss;
pub mod leastsq;
pub mod neldermead;
pub mod quad1d;
pub mod roots;
pub mod vecn;
