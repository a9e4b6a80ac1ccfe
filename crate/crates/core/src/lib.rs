//! Chain dynamics of self-maps on finite uniform spaces.
//!
//! A map on a finite carrier together with an entourage `E` determines a
//! transition graph with an edge `x → y` iff `(f(x), y) ∈ E`. Chains are
//! paths in that graph, and every chain property (transitivity, mixing,
//! exactness, recurrence) becomes a graph property. The same machinery runs
//! on product systems `f^(n)` and on the induced maps over the hyperspaces
//! `F_n(X)` of non-empty subsets with at most `n` points.
//!
//! ```
//! use hyperchain::{Carrier, Entourage, MapSystem, Builtin, Exact, Scalar};
//! use hyperchain::analysis::is_chain_mixing;
//!
//! let carrier = Carrier::<Exact>::interval_grid(64).unwrap();
//! let tent = MapSystem::builtin(carrier.clone(), Builtin::Tent).unwrap();
//! let e = Entourage::metric(&carrier, Exact::from_ratio(1, 16)).unwrap();
//! assert!(is_chain_mixing(&tent, &e).unwrap().verdict);
//! ```

pub mod analysis;
pub mod chains;
pub mod error;
pub mod graph;
pub mod hyperspace;
pub mod relation;
pub mod scalar;
pub mod system;
pub mod uniform;

pub use chains::{coprime_cycles, cycle_lengths_through, find_chain, find_chain_exact_length, validate_chain, Chain};
pub use error::{Error, Result};
pub use graph::TransitionGraph;
pub use hyperspace::{
    build_hyper_transition_graph, enumerate_fn, hyper_entourage_related, hyperspace_size,
    select_base_chain_from_hyper_chain, tuple_to_set, tuple_to_set_factor, FiniteSubset, HyperSystem,
};
pub use relation::BitMatrix;
pub use scalar::Scalar;
pub use system::{
    build_transition_graph, tensor_power, Builtin, FactorMap, Image, MapSystem, ProductSystem, SystemMap,
    DEFAULT_VERTEX_BUDGET,
};
pub use uniform::{epsilon_components, Carrier, Entourage, EntourageLabel, Metric, PointData};

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;
