//! Words in the generators: `g^3`, `h*g*h^-1*g^-4`, `[g,h]^3`, `(g*h)^2`.

use crate::error::ActionError;

/// A word as a list of `(generator index, exponent)` factors.
pub type Word = Vec<(usize, i64)>;

pub fn invert(w: &Word) -> Word {
    w.iter().rev().map(|(g, e)| (*g, -e)).collect()
}

pub fn power(w: &Word, e: i64) -> Word {
    let base = if e < 0 { invert(w) } else { w.clone() };
    (0..e.unsigned_abs())
        .flat_map(|_| base.iter().cloned())
        .collect()
}

pub fn format_word(w: &Word, gens: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|(g, e)| {
            if *e == 1 {
                gens[*g].clone()
            } else {
                format!("{}^{}", gens[*g], e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

struct Parser<'a> {
    s: Vec<char>,
    i: usize,
    gens: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ActionError {
        ActionError::BadWord(format!(
            "{msg} at {} in '{}'",
            self.i,
            self.s.iter().collect::<String>()
        ))
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn word(&mut self) -> Result<Word, ActionError> {
        let mut w = self.factor()?;
        while self.peek() == Some('*') {
            self.i += 1;
            w.extend(self.factor()?);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word, ActionError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.i += 1;
            let start = self.i;
            if self.peek() == Some('-') {
                self.i += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.i += 1;
            }
            let e: i64 = self.s[start..self.i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(power(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Word, ActionError> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let w = self.word()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(w)
            }
            Some('[') => {
                self.i += 1;
                let a = self.word()?;
                if self.peek() != Some(',') {
                    return Err(self.err("expected ','"));
                }
                self.i += 1;
                let b = self.word()?;
                if self.peek() != Some(']') {
                    return Err(self.err("expected ']'"));
                }
                self.i += 1;
                let mut w = a.clone();
                w.extend(b.clone());
                w.extend(invert(&a));
                w.extend(invert(&b));
                Ok(w)
            }
            Some('1') => {
                self.i += 1;
                Ok(Vec::new())
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.i;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.i += 1;
                }
                let name: String = self.s[start..self.i].iter().collect();
                let g = self
                    .gens
                    .iter()
                    .position(|x| *x == name)
                    .ok_or_else(|| ActionError::UnknownGenerator(name.clone()))?;
                Ok(vec![(g, 1)])
            }
            _ => Err(self.err("expected generator")),
        }
    }
}

pub fn parse_word(s: &str, gens: &[String]) -> Result<Word, ActionError> {
    let mut p = Parser {
        s: s.chars().filter(|c| !c.is_whitespace()).collect(),
        i: 0,
        gens,
    };
    let w = p.word()?;
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator_and_powers() {
        let g = vec!["g".to_string(), "h".to_string()];
        assert_eq!(
            parse_word("[g,h]", &g).unwrap(),
            vec![(0, 1), (1, 1), (0, -1), (1, -1)]
        );
        assert_eq!(parse_word("g^-2", &g).unwrap(), vec![(0, -1), (0, -1)]);
        assert_eq!(parse_word("(g*h)^2", &g).unwrap().len(), 4);
        assert!(parse_word("k", &g).is_err());
    }
}
