//! Exact-arithmetic verification of Gauss and Cartier congruences, the
//! p-curvature of first-order operators, and related classifiers over
//! cyclotomic number fields.
//!
//! The crate certifies, at desk scale, the arithmetic side of the criterion
//! for `y' = eta*y` to admit a nonzero algebraic solution: it generates
//! coefficient sequences over `Q(zeta_d)`, verifies Gauss/Cartier congruences
//! prime by prime with re-verifiable violation witnesses, computes
//! p-curvatures two independent ways, and classifies hypergeometric
//! parameter tuples. All arithmetic is exact; a `holds_to_bound` verdict is
//! evidence, a violation at an unramified prime is a proof of failure.

pub mod arith;
pub mod congruence;
pub mod cyclotomic;
pub mod dynzeta;
pub mod hypergeom;
pub mod pcurvature;
pub mod sequences;
pub mod series;

pub use arith::{padic_val, parse_rational, primes_in, Rational, Valuation};
pub use congruence::{
    cartier_check, gauss_check, prefix_diagnostic, puiseux_rescale, scan, CongruenceReport, Mode,
    ScanConfig, Verdict,
};
pub use cyclotomic::{CycloElem, CycloField, ResidueRing};
pub use pcurvature::{jacobson_residue, pcurv_is_zero, pcurv_iterate, strip_and_rescale, EtaTilde};
pub use sequences::{SequenceSource, SequenceSpec};
pub use series::{RationalRing, Ring, TruncSeries};
