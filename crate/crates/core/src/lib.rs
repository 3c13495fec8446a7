//! Goldman brackets of free homotopy classes on hyperbolic surfaces.

pub mod bracket;
pub mod cayley;
pub mod dehn;
pub mod hyperbolic;
pub mod lift;
pub mod probe;
pub mod surface;
pub mod svg;
pub mod verify;
pub mod word;
