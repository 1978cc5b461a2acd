//! Exact wall-and-chamber geometry for weak (tilt) stability conditions
//! on polarized Calabi-Yau threefolds.

pub mod cli;
pub mod dim1;
pub mod hilbert;
pub mod plane;
pub mod plot;
pub mod stability;
pub mod quad;
pub mod rat;
pub mod threefold;
pub mod walls;
pub mod wcf;
