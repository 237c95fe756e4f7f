//! Surjective, split and injective capacities of finitely generated modules over
//! Dedekind domains and integer quotient rings, with exact witnesses and brute-force
//! cross-checks.

pub mod arith;
pub mod bounds;
pub mod budget;
pub mod descriptor;
pub mod error;
pub mod global;
pub mod glq;
pub mod local;
pub mod module;
pub mod oracle;
pub mod random;
pub mod ring;
pub mod snf;
pub mod witness;

pub use bounds::{bound_report, BoundReport};
pub use budget::Budget;
pub use descriptor::{module_from_inline, module_from_json, module_to_json, parse_module, ModuleDescriptor};
pub use error::{Error, Result};
pub use global::{capacity, geq, inj_global, spl_global, sur_global, CapacityReport, Condition, GeqReport};
pub use glq::{build_glq, verify_glq, GlqInstance, GlqResult};
pub use local::{inj_local, local_capacity, spl_local, sur_local};
pub use module::{Capacity, FGModule, Kind, LocalModule};
pub use oracle::{oracle_capacity, FiniteModule};
pub use ring::{ClassElement, Ideal, PrimeId, RingDescriptor};
pub use snf::{snf, IntMatrix, SnfResult};
pub use witness::{verify as verify_witness, witness, Witness};
