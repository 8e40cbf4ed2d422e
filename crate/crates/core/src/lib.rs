//! Inner rates of m-primary ideals on resolution dual graphs.
//!
//! * [`exactalg`]: exact rationals and small dense linear algebra.
//! * [`dualgraph`]: decorated dual graphs, blow-ups, canonical keys.
//! * [`ratecalc`]: the inner-rates formula, the blow-up recursion, the
//!   skeletal metric and the piecewise-linear inner-rate function.
//! * [`toric`]: the computable engine for monomial ideals of `C{x, y}`.
//! * [`oracle`]: brute-force polynomial cross-checks of the engine.

pub mod dualgraph;
pub mod exactalg;
pub mod oracle;
pub mod ratecalc;
pub mod toric;

pub use dualgraph::{canonical_key, DecoratedTriple, DualGraph, GraphError, Vertex, VertexId};
pub use exactalg::{fmt_rat, solve_exact, IntMat, LinAlgError, Rat, RatVec};
pub use oracle::{OracleError, Poly2};
pub use ratecalc::{Blowup, GraphPoint, RateError, RateProfile};
pub use toric::{
    FanChain, IdealResolution, MonomialIdeal, MonomialModule2, Ray, RayInvariants, ToricError,
};
