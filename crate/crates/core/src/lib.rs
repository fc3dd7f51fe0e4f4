//! Exact arithmetic for p-adic eigenvalue data, root data, contraction regions,
//! higher Euler characteristics, and a rank-one Lefschetz identity on finite
//! regular graphs.

pub mod contraction;
pub mod cyclic;
pub mod euler;
pub mod graph;
pub mod lefschetz;
pub mod matrix;
pub mod padic;
pub mod poly;
pub mod root_datum;

pub use contraction::{check_ma_properties, ContractionError, LeviPair, MaReport, Subspace};
pub use euler::{central_extension_betti, chi, chi_r, covolume, verify_chichi, BettiVector, ChichiCheck};
pub use graph::{EdgeCharacter, GeodesicClass, GeodesicGraph, GraphError};
pub use lefschetz::{
    check_hecke, evaluate_distribution, geometric_side, hecke_operator, spectral_side_from_adjacency,
    verify_lefschetz, GeometricSide, LefschetzReport, SpectralSide, TestFunction, Value,
};
pub use matrix::{IntMatrix, RatMatrix};
pub use padic::{AbsValueSpectrum, PadicContext, PadicError, Valuation};
pub use poly::{IntPoly, RatPoly};
pub use root_datum::{Quasicharacter, RootDatum, TorusElement};
