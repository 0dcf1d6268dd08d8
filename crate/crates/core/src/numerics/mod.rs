//! Special functions, seeded random streams, root finding, quadrature, and
//! small dense Hermitian linear algebra. No external numerical dependencies;
//! every routine here is checked against an independent oracle in its tests.

pub mod linalg;
pub mod quad;
pub mod rng;
pub mod roots;
pub mod series;
pub mod special;
