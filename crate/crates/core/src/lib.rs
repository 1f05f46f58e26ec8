//! Exact van der Waerden numbers: search, base-`r` expansions, bound checks
//! and a registry of known values.

pub mod bounds;
pub mod expansion;
pub mod registry;
pub mod report;
pub mod search;

pub use bounds::{BoundReport, BoundsError, PowerBound, PrimeCaseReport};
pub use expansion::{expand, exponent_n, reconstruct, Expansion, ExpansionError};
pub use registry::{reconcile, Registry, RegistryError, Source, VdwRecord, Verdict};
pub use report::ReportRow;
pub use search::{
    compute_w, find_witness, has_mono_ap, verify_unavoidable_exhaustive, Coloring, SearchConfig,
    SearchError, SearchOutcome, WitnessFile, WitnessResult,
};
