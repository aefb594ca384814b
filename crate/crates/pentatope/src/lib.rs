//! Exact arithmetic for the group generated by the regular 4-simplex vertex
//! quaternions.
//!
//! The crate has four layers:
//!
//! * [`goldfield`] — the scalar ring Z[√5, 1/2] and the shifted logarithm of
//!   the algebraic denominator (`lad`).
//! * [`freewords`] — reduced words in the rank-4 free group, the alternating
//!   norm and pairs expression, Klein permutations, and clutch reduction.
//! * [`quatrep`] — quaternions over the scalar ring, the simplex vertex
//!   table, and the representation sending generators to vertices.
//! * [`theoremlab`] — the verification campaign relating `lad` of the
//!   representation's components to the reduced alternating norms, the
//!   quadratic identity family, and checkable derivation certificates.
//!
//! All arithmetic is exact; nothing in a decision path touches floating
//! point. With the default `parallel` feature the campaign fans out over
//! word prefixes via rayon and falls back to a sequential scan otherwise.

pub mod freewords;
pub mod goldfield;
pub mod quatrep;
pub mod theoremlab;

pub use freewords::{AltExpression, KleinPerm, Letter, Word};
pub use goldfield::{Dyadic5, LadValue};
pub use quatrep::{Quaternion5, VertexTable};
pub use theoremlab::{CampaignReport, LadCertificate, TheoremReport};
