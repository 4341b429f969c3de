//! Standard bases of parametric polynomial ideals under arbitrary monomial
//! orders, generic bases valid off a hypersurface of parameter space,
//! comprehensive partitions and Hilbert-Samuel data.

pub mod orders;
pub mod polyring;
pub mod division;
pub mod buchberger;
pub mod genstd;
pub mod comprehensive;
pub mod hilbert;
