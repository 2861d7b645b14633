pub mod error;
pub mod exactnum;
pub mod groups;
pub mod linalg;
pub mod par;
pub mod refgroup;
pub mod tau;
pub mod leaves;
pub mod cherednik;
pub mod catalog;
pub mod verify;
pub mod report;
pub mod cli;
