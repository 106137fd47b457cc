use thiserror::Error;

use crate::arena::{NodeId, Owner};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("duplicate node `{0}`")]
    DuplicateNode(String),

    #[error("duplicate edge `{src}` -> `{dst}`")]
    DuplicateEdge { src: String, dst: String },

    #[error("edge endpoint `{0}` is not a declared node")]
    DanglingEndpoint(String),

    #[error("invalid node name `{0}`")]
    InvalidName(String),

    #[error("invalid arena: {0}")]
    Invalid(String),

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("weight arithmetic overflowed")]
    Overflow,

    #[error("arena fairness lies with {actual}, but {requested} was requested")]
    SideMismatch { requested: Owner, actual: Owner },

    #[error("energy games with fairness on player 2 have no gadget")]
    NoGadget,

    #[error("region refers to node {0} outside the gadget arena")]
    RegionOutOfRange(NodeId),

    #[error("value recovery failed at node {node}: {msg}")]
    ValueRecovery { node: NodeId, msg: String },

    #[error("{player} does not win from {nodes:?}")]
    LosingNodes { player: Owner, nodes: Vec<NodeId> },

    #[error("strategy machine has no move at node {0}")]
    IncompleteMachine(NodeId),

    #[error("strategy move {from} -> {to} is not an arena edge")]
    IllegalMove { from: NodeId, to: NodeId },

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),

    #[error("simulation exceeded {0} steps")]
    StepLimit(usize),

    #[error("oracle budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
