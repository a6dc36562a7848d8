//! Solver programs and their canonical binary encoding.
//!
//! Each instruction is one opcode byte followed by its operands as unsigned
//! LEB128 varints (`PUSH` zigzag-maps its signed operand first). `LOAD` and
//! `STORE` carry their register in the low nibble of the opcode byte instead.
//! Varints must be minimal, so every program has exactly one encoding and
//! decoding inverts it. Jump operands are instruction indices.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instr {
    Halt,
    NoSol,
    Push(i64),
    Pop,
    Dup,
    Swap,
    Over,
    Pick(u64),
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Lt,
    Gt,
    Not,
    Min,
    Max,
    Abs,
    Jmp(u64),
    Jz(u64),
    Jnz(u64),
    Load(u64),
    Store(u64),
    Arg,
    Argc,
    Pidx,
    Limit,
    NodeAt,
    Coord,
    StepLeft,
    Output,
    RelayIdx,
    ConstIdx,
    Emit,
    Oracle,
    Clear,
}

/// Number of registers addressable by `LOAD`/`STORE`.
pub const REGISTERS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Operand {
    None,
    Signed,
    Unsigned,
    Register,
}

/// (opcode, mnemonic, operand kind) for every instruction.
const TABLE: &[(u8, &str, Operand)] = &[
    (0x00, "halt", Operand::None),
    (0x01, "nosol", Operand::None),
    (0x02, "push", Operand::Signed),
    (0x03, "pop", Operand::None),
    (0x04, "dup", Operand::None),
    (0x05, "swap", Operand::None),
    (0x06, "over", Operand::None),
    (0x07, "pick", Operand::Unsigned),
    (0x10, "add", Operand::None),
    (0x11, "sub", Operand::None),
    (0x12, "mul", Operand::None),
    (0x13, "div", Operand::None),
    (0x14, "mod", Operand::None),
    (0x15, "eq", Operand::None),
    (0x16, "lt", Operand::None),
    (0x17, "gt", Operand::None),
    (0x18, "not", Operand::None),
    (0x19, "min", Operand::None),
    (0x1a, "max", Operand::None),
    (0x1b, "abs", Operand::None),
    (0x20, "jmp", Operand::Unsigned),
    (0x21, "jz", Operand::Unsigned),
    (0x22, "jnz", Operand::Unsigned),
    (0x60, "load", Operand::Register),
    (0x70, "store", Operand::Register),
    (0x30, "arg", Operand::None),
    (0x31, "argc", Operand::None),
    (0x32, "pidx", Operand::None),
    (0x33, "limit", Operand::None),
    (0x40, "node_at", Operand::None),
    (0x41, "coord", Operand::None),
    (0x42, "step_left", Operand::None),
    (0x43, "output", Operand::None),
    (0x50, "relay_idx", Operand::None),
    (0x51, "const_idx", Operand::None),
    (0x52, "emit", Operand::None),
    (0x53, "oracle", Operand::None),
    (0x54, "clear", Operand::None),
];

impl Instr {
    /// Opcode byte, without the register nibble of `LOAD`/`STORE`.
    pub fn opcode(&self) -> u8 {
        use Instr::*;
        match self {
            Halt => 0x00,
            NoSol => 0x01,
            Push(_) => 0x02,
            Pop => 0x03,
            Dup => 0x04,
            Swap => 0x05,
            Over => 0x06,
            Pick(_) => 0x07,
            Add => 0x10,
            Sub => 0x11,
            Mul => 0x12,
            Div => 0x13,
            Mod => 0x14,
            Eq => 0x15,
            Lt => 0x16,
            Gt => 0x17,
            Not => 0x18,
            Min => 0x19,
            Max => 0x1a,
            Abs => 0x1b,
            Jmp(_) => 0x20,
            Jz(_) => 0x21,
            Jnz(_) => 0x22,
            Load(_) => 0x60,
            Store(_) => 0x70,
            Arg => 0x30,
            Argc => 0x31,
            Pidx => 0x32,
            Limit => 0x33,
            NodeAt => 0x40,
            Coord => 0x41,
            StepLeft => 0x42,
            Output => 0x43,
            RelayIdx => 0x50,
            ConstIdx => 0x51,
            Emit => 0x52,
            Oracle => 0x53,
            Clear => 0x54,
        }
    }

    pub fn mnemonic(&self) -> &'static str {
        let op = self.opcode();
        TABLE.iter().find(|e| e.0 == op).expect("every opcode is tabled").1
    }

    fn from_parts(op: u8, signed: i64, unsigned: u64) -> Option<Instr> {
        use Instr::*;
        Some(match op {
            0x00 => Halt,
            0x01 => NoSol,
            0x02 => Push(signed),
            0x03 => Pop,
            0x04 => Dup,
            0x05 => Swap,
            0x06 => Over,
            0x07 => Pick(unsigned),
            0x10 => Add,
            0x11 => Sub,
            0x12 => Mul,
            0x13 => Div,
            0x14 => Mod,
            0x15 => Eq,
            0x16 => Lt,
            0x17 => Gt,
            0x18 => Not,
            0x19 => Min,
            0x1a => Max,
            0x1b => Abs,
            0x20 => Jmp(unsigned),
            0x21 => Jz(unsigned),
            0x22 => Jnz(unsigned),
            0x60 => Load(unsigned),
            0x70 => Store(unsigned),
            0x30 => Arg,
            0x31 => Argc,
            0x32 => Pidx,
            0x33 => Limit,
            0x40 => NodeAt,
            0x41 => Coord,
            0x42 => StepLeft,
            0x43 => Output,
            0x50 => RelayIdx,
            0x51 => ConstIdx,
            0x52 => Emit,
            0x53 => Oracle,
            0x54 => Clear,
            _ => return None,
        })
    }

    /// Builds an instruction from its mnemonic and optional integer operand.
    pub fn from_mnemonic(name: &str, operand: Option<i64>) -> Result<Instr, String> {
        let (op, _, kind) = TABLE
            .iter()
            .find(|e| e.1 == name)
            .copied()
            .ok_or_else(|| format!("unknown instruction {name:?}"))?;
        match (kind, operand) {
            (Operand::None, None) => Ok(Instr::from_parts(op, 0, 0).expect("tabled")),
            (Operand::None, Some(_)) => Err(format!("{name} takes no operand")),
            (_, None) => Err(format!("{name} needs an operand")),
            (Operand::Signed, Some(x)) => Ok(Instr::from_parts(op, x, 0).expect("tabled")),
            (Operand::Unsigned, Some(x)) if x >= 0 => Ok(Instr::from_parts(op, 0, x as u64).expect("tabled")),
            (Operand::Unsigned, Some(_)) => Err(format!("{name} operand must be nonnegative")),
            (Operand::Register, Some(x)) if (0..REGISTERS as i64).contains(&x) => {
                Ok(Instr::from_parts(op, 0, x as u64).expect("tabled"))
            }
            (Operand::Register, Some(_)) => Err(format!("{name} register must be in 0..{REGISTERS}")),
        }
    }

    pub fn jump_target(&self) -> Option<u64> {
        match self {
            Instr::Jmp(t) | Instr::Jz(t) | Instr::Jnz(t) => Some(*t),
            _ => None,
        }
    }

    pub fn operand(&self) -> Option<i64> {
        match self {
            Instr::Push(x) => Some(*x),
            Instr::Pick(x) | Instr::Jmp(x) | Instr::Jz(x) | Instr::Jnz(x) | Instr::Load(x) | Instr::Store(x) => {
                Some(*x as i64)
            }
            _ => None,
        }
    }

    // callers guarantee registers below 16
    fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            Instr::Load(r) | Instr::Store(r) => {
                out.push(self.opcode() | *r as u8);
                return;
            }
            _ => out.push(self.opcode()),
        }
        match self {
            Instr::Push(x) => write_uleb(out, zigzag(*x)),
            Instr::Pick(x) | Instr::Jmp(x) | Instr::Jz(x) | Instr::Jnz(x) => write_uleb(out, *x),
            _ => {}
        }
    }
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.operand() {
            Some(x) => write!(f, "{} {x}", self.mnemonic()),
            None => f.write_str(self.mnemonic()),
        }
    }
}

fn zigzag(x: i64) -> u64 {
    ((x << 1) ^ (x >> 63)) as u64
}

fn unzigzag(u: u64) -> i64 {
    ((u >> 1) as i64) ^ -((u & 1) as i64)
}

fn write_uleb(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn read_uleb(bytes: &[u8], at: &mut usize) -> Result<u64, DecodeError> {
    let start = *at;
    let mut x: u64 = 0;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*at).ok_or(DecodeError::Truncated(start))?;
        *at += 1;
        if shift == 63 && b > 1 {
            return Err(DecodeError::Overflow(start));
        }
        x |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            // a zero final byte after the first means a longer-than-needed form
            if b == 0 && *at - start > 1 {
                return Err(DecodeError::NonCanonical(start));
            }
            return Ok(x);
        }
        shift += 7;
        if shift > 63 {
            return Err(DecodeError::Overflow(start));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DecodeError {
    #[error("unknown opcode 0x{op:02x} at byte {at}")]
    UnknownOpcode { op: u8, at: usize },
    #[error("truncated operand at byte {0}")]
    Truncated(usize),
    #[error("operand overflows 64 bits at byte {0}")]
    Overflow(usize),
    #[error("non-minimal varint at byte {0}")]
    NonCanonical(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    #[error("program is empty")]
    Empty,
    #[error("instruction {at}: jump target {target} out of range")]
    BadJump { at: usize, target: u64 },
    #[error("instruction {at}: register {reg} out of range")]
    BadRegister { at: usize, reg: u64 },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// A well-formed solver program: nonempty, jumps inside the program,
/// registers in range.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolverProgram {
    code: Vec<Instr>,
}

impl SolverProgram {
    pub fn new(code: Vec<Instr>) -> Result<SolverProgram, ProgramError> {
        if code.is_empty() {
            return Err(ProgramError::Empty);
        }
        for (at, ins) in code.iter().enumerate() {
            if let Some(target) = ins.jump_target() {
                if target >= code.len() as u64 {
                    return Err(ProgramError::BadJump { at, target });
                }
            }
            if let Instr::Load(reg) | Instr::Store(reg) = ins {
                if *reg >= REGISTERS {
                    return Err(ProgramError::BadRegister { at, reg: *reg });
                }
            }
        }
        Ok(SolverProgram { code })
    }

    pub fn code(&self) -> &[Instr] {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for ins in &self.code {
            ins.encode_into(&mut out);
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<SolverProgram, ProgramError> {
        let mut code = Vec::new();
        let mut at = 0;
        while at < bytes.len() {
            let byte = bytes[at];
            let start = at;
            at += 1;
            let op = if matches!(byte & 0xf0, 0x60 | 0x70) { byte & 0xf0 } else { byte };
            let kind = TABLE
                .iter()
                .find(|e| e.0 == op)
                .map(|e| e.2)
                .ok_or(DecodeError::UnknownOpcode { op, at: start })?;
            let ins = match kind {
                Operand::None => Instr::from_parts(op, 0, 0),
                Operand::Signed => Instr::from_parts(op, unzigzag(read_uleb(bytes, &mut at)?), 0),
                Operand::Unsigned => Instr::from_parts(op, 0, read_uleb(bytes, &mut at)?),
                Operand::Register => Instr::from_parts(op, 0, u64::from(byte & 0x0f)),
            };
            code.push(ins.expect("tabled opcode"));
        }
        SolverProgram::new(code)
    }

    /// Length of the canonical encoding in bits.
    pub fn encoded_bits(&self) -> u64 {
        self.encode().len() as u64 * 8
    }
}

/// Bit length of an encoded program after checking that it decodes.
pub fn encoded_bits(bytes: &[u8]) -> Result<u64, ProgramError> {
    Ok(SolverProgram::decode(bytes)?.encoded_bits())
}

/// Mnemonic/opcode table, for documentation and tooling.
pub fn opcode_table() -> Vec<(u8, &'static str, &'static str)> {
    TABLE
        .iter()
        .map(|(op, name, kind)| {
            let k = match kind {
                Operand::None => "",
                Operand::Signed => "zigzag varint",
                Operand::Unsigned => "varint",
                Operand::Register => "register in low nibble",
            };
            (*op, *name, k)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halt_is_one_byte() {
        let p = SolverProgram::new(vec![Instr::Halt]).unwrap();
        assert_eq!(p.encode(), vec![0x00]);
        assert_eq!(p.encoded_bits(), 8);
    }

    #[test]
    fn varints() {
        let p = SolverProgram::new(vec![Instr::Push(-1), Instr::Push(64), Instr::Push(i64::MIN), Instr::Halt]).unwrap();
        let bytes = p.encode();
        assert_eq!(&bytes[..2], &[0x02, 0x01]);
        assert_eq!(&bytes[2..5], &[0x02, 0x80, 0x01]);
        assert_eq!(SolverProgram::decode(&bytes).unwrap(), p);
    }

    #[test]
    fn non_minimal_rejected() {
        assert_eq!(
            SolverProgram::decode(&[0x02, 0x81, 0x00, 0x00]),
            Err(ProgramError::Decode(DecodeError::NonCanonical(1)))
        );
        assert!(SolverProgram::decode(&[0x02, 0x80]).is_err());
        assert!(SolverProgram::decode(&[0xff]).is_err());
    }

    #[test]
    fn structure_checked() {
        assert_eq!(SolverProgram::new(vec![]), Err(ProgramError::Empty));
        assert!(SolverProgram::new(vec![Instr::Jmp(1)]).is_err());
        assert!(SolverProgram::new(vec![Instr::Load(16), Instr::Halt]).is_err());
    }

    #[test]
    fn mnemonics_roundtrip() {
        for (op, name, kind) in opcode_table() {
            let operand = (!kind.is_empty()).then_some(0);
            let ins = Instr::from_mnemonic(name, operand).unwrap();
            assert_eq!(ins.opcode(), op);
            assert_eq!(ins.mnemonic(), name);
        }
    }
}
