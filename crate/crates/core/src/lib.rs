//! Split-step discrete-time quantum walks: Floquet bands, chiral winding
//! invariants, quench dynamics (Loschmidt amplitudes, geometric phase,
//! dynamical topological order parameter), a real-space walker and
//! likelihood-based state reconstruction.

pub mod floquet;
pub mod grid;
pub mod lattice;
pub mod quench;
pub mod scenario;
pub mod su2;
pub mod tomography;
pub mod topology;

pub use floquet::{
    band_structure, floquet_mode, is_flat_band, walk_unitary, BandStructure, FloquetMode, TimeFrame,
    WalkParams,
};
pub use grid::{Angle, MomentumGrid};
pub use su2::{su2_decompose, BlochVector, Spinor, Su2Decomposition, Su2Error, Unitary2};
pub use lattice::{LatticeError, LatticeState};
pub use quench::{InitialSpec, MomentumField, Quench, QuenchError, QuenchTrace};
pub use scenario::Preset;
pub use tomography::{
    canonical_gauge, fidelity, reconstruct, synthesize_counts, AnnealConfig, CountSets, Reconstruction, Shots,
    TomographyError,
};
pub use topology::{invariant_doublet, phase_diagram, InvariantDoublet, PhaseDiagram, TopologyError};
