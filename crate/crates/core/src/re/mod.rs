//! Solver programs, their interpreter and encoding, and verification of
//! reverse-engineering claims.

mod asm;
mod family;
mod interp;
mod program;
mod verify;

pub use asm::{parse_asm, print_asm, AsmError, HEADER as ASM_HEADER};
pub use family::{ClassKey, FamilyError, HypothesisFamily, IOClass, PatternCell};
pub use interp::{
    run_solver, run_solver_with, Fault, MembershipOracle, OracleBudget, RunConfig, SimOracle, SolverOutcome,
    DEFAULT_FUEL,
};
pub use program::{encoded_bits, opcode_table, DecodeError, Instr, ProgramError, SolverProgram, REGISTERS};
pub use verify::{verify_re, Bounds, Evidence, Outcome, Reason, Verdict, VerifyConfig};
