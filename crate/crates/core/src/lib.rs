pub mod algebra;
pub mod cli;
pub mod counting;
pub mod dense;
pub mod mask;
pub mod mub;
pub mod pauli;
pub mod polar;
pub mod spread;
