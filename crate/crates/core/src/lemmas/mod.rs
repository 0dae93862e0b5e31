//! Evaluable forms of the functions used in the optimality proofs, plus grid
//! batteries that check the sign and identity claims made about them.

pub mod appendix;
pub mod battery;
pub mod exp;
pub mod gauss;

pub use appendix::{AppendixFunction, ScaledValue};
pub use battery::{run_battery, CheckKind, LemmaCheck, Suite};
pub use exp::{exp_g3_at_zero, ExpBounds, ExpFrame};
pub use gauss::{gauss_a, gauss_s, gauss_s_hyperbolic, gauss_z, GaussFrame};
