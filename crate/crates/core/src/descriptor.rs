//! Textual group descriptors.
//!
//! Grammar:
//!
//! ```text
//! descriptor := "S" n | "Z" n | "D" n | "Q8"
//!             | "prod(" descriptor "," descriptor ")"
//!             | "perm:[" generator ("," generator)* "]"
//! generator  := cycle+          (adjacent cycles compose into one generator)
//! cycle      := "(" point* ")"  (points 1-based, separated by spaces or commas)
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest point moved by an explicit permutation generator.
pub const MAX_PERM_POINTS: usize = 12;
/// Largest `n` accepted for `S<n>`.
pub const MAX_SYMMETRIC_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDescriptor {
    Symmetric(usize),
    Cyclic(usize),
    /// Dihedral group of the regular n-gon, order 2n.
    Dihedral(usize),
    Quaternion,
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
    /// Generators as lists of cycles over 1-based points.
    Permutations(Vec<Vec<Vec<usize>>>),
}

fn malformed(input: &str, reason: impl Into<String>) -> Error {
    Error::MalformedDescriptor {
        input: input.to_string(),
        reason: reason.into(),
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { src: s, pos: 0, depth: 0 };
        let d = parser.descriptor()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(malformed(s, format!("trailing input at byte {}", parser.pos)));
        }
        Ok(d)
    }
}

/// Nesting limit for `prod(...)`.
const MAX_DEPTH: usize = 16;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(malformed(self.src, format!("expected `{token}` at byte {}", self.pos)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(malformed(self.src, format!("expected a number at byte {}", self.pos)));
        }
        let text = &self.rest()[..digits];
        self.pos += digits;
        text.parse()
            .map_err(|_| malformed(self.src, format!("number `{text}` out of range")))
    }

    fn descriptor(&mut self) -> Result<GroupDescriptor> {
        self.skip_ws();
        if self.eat("prod(") {
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(malformed(self.src, "products nested too deeply"));
            }
            let a = self.descriptor()?;
            self.expect(",")?;
            let b = self.descriptor()?;
            self.expect(")")?;
            self.depth -= 1;
            return Ok(GroupDescriptor::Product(Box::new(a), Box::new(b)));
        }
        if self.eat("perm:") {
            return self.permutations();
        }
        if self.eat("Q8") {
            return Ok(GroupDescriptor::Quaternion);
        }
        let family = self.rest().chars().next();
        match family {
            Some('S') | Some('Z') | Some('D') => {
                self.pos += 1;
                let n = self.number()?;
                if n == 0 {
                    return Err(malformed(self.src, "family parameter must be positive"));
                }
                match family {
                    Some('S') if n > MAX_SYMMETRIC_DEGREE => Err(malformed(
                        self.src,
                        format!("symmetric groups are limited to n <= {MAX_SYMMETRIC_DEGREE}"),
                    )),
                    Some('S') => Ok(GroupDescriptor::Symmetric(n)),
                    Some('Z') => Ok(GroupDescriptor::Cyclic(n)),
                    _ => Ok(GroupDescriptor::Dihedral(n)),
                }
            }
            _ => Err(malformed(self.src, format!("unknown group family at byte {}", self.pos))),
        }
    }

    fn permutations(&mut self) -> Result<GroupDescriptor> {
        self.expect("[")?;
        let mut gens = Vec::new();
        if self.eat("]") {
            return Ok(GroupDescriptor::Permutations(gens));
        }
        loop {
            let mut cycles = Vec::new();
            self.skip_ws();
            while self.rest().starts_with('(') {
                cycles.push(self.cycle()?);
                self.skip_ws();
            }
            if cycles.is_empty() {
                return Err(malformed(self.src, format!("expected a cycle at byte {}", self.pos)));
            }
            gens.push(cycles);
            if self.eat("]") {
                break;
            }
            self.expect(",")?;
        }
        Ok(GroupDescriptor::Permutations(gens))
    }

    fn cycle(&mut self) -> Result<Vec<usize>> {
        self.expect("(")?;
        let mut points = Vec::new();
        loop {
            if self.eat(")") {
                return Ok(points);
            }
            if !points.is_empty() {
                self.eat(",");
            }
            points.push(self.number()?);
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Symmetric(n) => write!(f, "S{n}"),
            GroupDescriptor::Cyclic(n) => write!(f, "Z{n}"),
            GroupDescriptor::Dihedral(n) => write!(f, "D{n}"),
            GroupDescriptor::Quaternion => write!(f, "Q8"),
            GroupDescriptor::Product(a, b) => write!(f, "prod({a},{b})"),
            GroupDescriptor::Permutations(gens) => {
                write!(f, "perm:[")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    for cycle in g {
                        let pts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}
