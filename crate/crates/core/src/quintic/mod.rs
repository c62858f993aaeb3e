//! Piecewise Lagrangian 3-spheres on the Fermat member of the quintic pencil
//! and the 125-node degeneration.
//!
//! Cells are described in the chart yⱼ = xⱼ/x₅ on the x₅ root selected by the
//! branch index. The combinatorics is constant for pencil parameters in
//! [0, 5), so everything is computed at the Fermat point.

mod cells;
mod pairing;
mod proposition;

pub use cells::{
    branch_transport, cells_disjoint, cycle_index, cycles_disjoint, generate_cycles, Constraint,
    CycleLabel, GroupElement, PhaseCell, QuinticCycle, QuinticError, ORDER,
};
pub use pairing::{
    pairing_entry, pairing_matrix, vanishing_classes, PerturbationRule, VanishingClasses,
};
pub use proposition::{
    build_model, full_configuration, real_solution_check, reproduce_proposition,
    vanishing_configuration, PropositionReport, QuinticModel, RealSolutionCheck, ReproduceOptions,
    RuleAttempt, TableRow, PAIRING_RANK_TARGET, VANISHING_SPAN_TARGET,
};
