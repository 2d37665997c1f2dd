use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Chart and matrix variables. The derived order (kind, then indices) is the
/// variable order behind the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A(u16, u16),
    B(u16, u16),
    /// `Xi(k, i, j)` is the layer-k coordinate in row i, column j.
    Xi(u16, u16, u16),
    X(u16, u16),
    Y(u16, u16),
    Z(u16, u16),
    W(u16, u16),
    T,
    /// Pivot-ratio coordinates of the Kausz charts, printed `t[i]`.
    Ratio(u16),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::A(i, j) => write!(f, "a[{i},{j}]"),
            Var::B(i, j) => write!(f, "b[{i},{j}]"),
            Var::Xi(k, i, j) => write!(f, "xi[{k};{i},{j}]"),
            Var::X(i, j) => write!(f, "x[{i},{j}]"),
            Var::Y(i, j) => write!(f, "y[{i},{j}]"),
            Var::Z(i, j) => write!(f, "z[{i},{j}]"),
            Var::W(i, j) => write!(f, "w[{i},{j}]"),
            Var::T => write!(f, "t"),
            Var::Ratio(i) => write!(f, "t[{i}]"),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var, Error> {
        let bad = || Error::Parse(format!("not a variable: {s:?}"));
        let s = s.trim();
        let (head, idx) = match s.find('[') {
            Some(p) => {
                let inner = s[p + 1..].strip_suffix(']').ok_or_else(bad)?;
                (&s[..p], Some(inner))
            }
            None => (s, None),
        };
        let nums = |text: &str| -> Result<Vec<u16>, Error> {
            text.split([',', ';']).map(|x| x.trim().parse::<u16>().map_err(|_| bad())).collect()
        };
        let pair = |text: Option<&str>| -> Result<(u16, u16), Error> {
            match nums(text.ok_or_else(bad)?)?.as_slice() {
                [i, j] => Ok((*i, *j)),
                _ => Err(bad()),
            }
        };
        Ok(match head {
            "a" => pair(idx).map(|(i, j)| Var::A(i, j))?,
            "b" => pair(idx).map(|(i, j)| Var::B(i, j))?,
            "x" => pair(idx).map(|(i, j)| Var::X(i, j))?,
            "y" => pair(idx).map(|(i, j)| Var::Y(i, j))?,
            "z" => pair(idx).map(|(i, j)| Var::Z(i, j))?,
            "w" => pair(idx).map(|(i, j)| Var::W(i, j))?,
            "xi" => {
                let text = idx.ok_or_else(bad)?;
                if !text.contains(';') {
                    return Err(bad());
                }
                match nums(text)?.as_slice() {
                    [k, i, j] => Var::Xi(*k, *i, *j),
                    _ => return Err(bad()),
                }
            }
            "t" => match idx {
                None => Var::T,
                Some(text) => match nums(text)?.as_slice() {
                    [i] => Var::Ratio(*i),
                    _ => return Err(bad()),
                },
            },
            _ => return Err(bad()),
        })
    }
}
