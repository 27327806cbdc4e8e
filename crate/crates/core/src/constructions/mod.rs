//! Explicit ETF builders: Paley conference graphs and matrices, doubling,
//! closed-form 2-circulant synthesis, Renes–Strohmer seeds, Steiner
//! circulant frames and small parametric families.

mod conference;
mod dispatch;
mod doubling;
mod families;

pub use conference::{
    paley_conference, paley_graph, standard_line_reps, standard_reindex, symplectic_conference, ConferenceGraph,
    ConferenceMatrix, Symmetry,
};
pub use dispatch::{build_label, table_dispatch, Label};
pub use doubling::{
    conference_doubling_beta, double_conference_graph, double_renes_strohmer, double_signature, doubling_coefficients,
    paley_plus_signature, renes_strohmer_gram, synthesize_doubled_frame, DoubledFrame, RenesStrohmer,
};
pub use families::{
    check_planar_difference_set, family_3x6, steiner_circulant, steiner_default, zauner_2x4_entries,
    zauner_2x4_signature,
};
