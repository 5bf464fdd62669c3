//! The eight QED descriptors, their desirability functions and the QED
//! aggregate, driven by versioned parameter tables.

mod crippen;
mod descriptors;
mod qed;
mod rings;
mod tables;
mod tpsa;

use std::path::PathBuf;

use thiserror::Error;

use crate::smiles::SmilesError;

pub use crippen::{crippen_contributions, crippen_types, CrippenType};
pub use descriptors::{
    aromatic_ring_count, descriptors, hydrogen_bond_acceptors, hydrogen_bond_donors,
    molecular_weight, rotatable_bonds, structural_alerts, DescriptorVector, DESCRIPTOR_NAMES,
};
pub use qed::{desirability, qed, qed_from, qed_of};
pub use rings::RingInfo;
pub use tables::{
    Alert, DesirabilityParams, PropertyTables, TpsaRule, DATA_DIR_ENV, TABLE_FILES,
};
pub use tpsa::{tpsa, tpsa_contributions};

#[derive(Debug, Error)]
pub enum PropertyError {
    #[error("no atomic weight for element {0}")]
    UnknownElementWeight(String),
    #[error("atom {atom} ({element}) matches no logP atom type")]
    UntypedAtom { atom: usize, element: String },
    #[error("logP type {0} is missing from the contribution table")]
    MissingLogPType(String),
    #[error("{table} line {line}: {reason}")]
    MalformedTable {
        table: String,
        line: usize,
        reason: String,
    },
    #[error("alert {name} has an unparseable pattern: {source}")]
    InvalidAlert {
        name: String,
        #[source]
        source: SmilesError,
    },
    #[error("desirability parameters for {0} are missing")]
    MissingDesirability(String),
    #[error("I/O failure on {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
