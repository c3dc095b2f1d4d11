pub mod branching;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod quasipoly;
pub mod oracle;
pub mod osbases;
pub mod par;
pub mod pipeline;
pub mod residue;
pub mod rootdata;
