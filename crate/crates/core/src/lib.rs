//! Fragment-seeded molecule generation: SMILES grammar, an attention + LSTM
//! next-token model with exact gradients, descriptor and QED scoring, the
//! training/generation pipeline, and report helpers.

pub mod scalar;
pub mod smiles;
pub mod neural;
pub mod properties;
pub mod pipeline;
pub mod report;
