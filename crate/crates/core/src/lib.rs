pub mod circuit;
pub mod clifford;
pub mod codes;
pub mod error;
pub mod f2;
pub mod lcs;
pub mod pauli;
pub mod symplectic;
