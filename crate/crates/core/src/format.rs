//! Text and JSON files for forms and transformation witnesses.
//!
//! The text format is a list of `key: value` lines. A key with nothing
//! after the colon starts a matrix whose rows follow on indented lines,
//! entries separated by whitespace. `#` starts a comment.
//!
//! ```text
//! # B5
//! flavor: supersymmetric
//! k: 3
//! ell: 2
//! B:
//!   1 0 0 0
//!   0 1 0 0
//!   0 0 1 0
//! ```
//!
//! Supersymmetric files give the `k x 2l` coupling block; skew files give
//! the `2l x k` block (rows index the even, symplectic part). The optional
//! `even_block` and `odd_block` replace the standard diagonal blocks.
//! A file whose first non-blank character is `{` is read as JSON with the
//! same field names and matrices as lists of rows of scalar strings.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{ApproxContext, ExactScalar};
use crate::superspace::{make_standard_gram, normalize_gram, parity_reverse, Flavor, GramForm, Normalization};

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

#[derive(Clone, Debug)]
enum Value {
    Text(Token),
    Rows(Vec<Vec<Token>>),
}

#[derive(Clone, Debug)]
struct Entry {
    key: Token,
    value: Value,
}

fn parse_error(path: &str, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), line, column, message: message.into() }
}

fn tokens(line: &str, line_no: usize) -> Vec<Token> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, ch) in line.chars().enumerate().chain(std::iter::once((line.chars().count(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(col),
            (true, Some(s)) => {
                out.push(Token {
                    text: line.chars().skip(s).take(col - s).collect(),
                    line: line_no,
                    column: s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_document(text: &str, path: &str) -> Result<Vec<Entry>> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            let Some(Entry { value: Value::Rows(rows), .. }) = entries.last_mut() else {
                let column = line.chars().take_while(|c| c.is_whitespace()).count() + 1;
                return Err(parse_error(path, line_no, column, "indented row outside a matrix"));
            };
            rows.push(tokens(line, line_no));
            continue;
        }
        let Some(colon) = line.find(':') else {
            return Err(parse_error(path, line_no, 1, "expected `key: value`"));
        };
        let key = line[..colon].trim_end();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(parse_error(path, line_no, 1, "malformed key"));
        }
        if entries.iter().any(|e| e.key.text == key) {
            return Err(parse_error(path, line_no, 1, format!("duplicate key `{key}`")));
        }
        let key = Token { text: key.to_string(), line: line_no, column: 1 };
        let rest = &line[colon + 1..];
        let offset = line[..colon + 1].chars().count();
        let value = match tokens(rest, line_no).as_slice() {
            [] => Value::Rows(Vec::new()),
            [t] => Value::Text(Token { column: t.column + offset, ..t.clone() }),
            [_, t, ..] => {
                return Err(parse_error(path, line_no, t.column + offset, "one value per key"));
            }
        };
        entries.push(Entry { key, value });
    }
    Ok(entries)
}

fn scalar_at(token: &Token, path: &str) -> Result<ExactScalar> {
    token.text.parse().map_err(|e| match e {
        Error::ParseScalar { column, message, .. } => parse_error(path, token.line, token.column + column - 1, message),
        other => other,
    })
}

fn matrix_from_tokens(rows: &[Vec<Token>], key: &Token, path: &str) -> Result<Matrix<ExactScalar>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut data = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != cols {
            return Err(parse_error(
                path,
                row[0].line,
                row[0].column,
                format!("row has {} entries, expected {cols}", row.len()),
            ));
        }
        data.push(row.iter().map(|t| scalar_at(t, path)).collect::<Result<Vec<_>>>()?);
    }
    if data.is_empty() {
        return Err(parse_error(path, key.line, key.column, format!("matrix `{}` has no rows", key.text)));
    }
    Matrix::from_rows(data, cols)
}

/// A form as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct FormFile {
    pub flavor: Flavor,
    pub k: usize,
    pub ell: usize,
    /// `k x 2l` (supersymmetric) or `2l x k` (skew).
    pub b: Matrix<ExactScalar>,
    pub even_block: Option<Matrix<ExactScalar>>,
    pub odd_block: Option<Matrix<ExactScalar>>,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    flavor: Flavor,
    k: usize,
    ell: usize,
    #[serde(rename = "B")]
    b: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    even_block: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    odd_block: Option<Vec<Vec<String>>>,
}

fn position_of(text: &str, needle: &str) -> (usize, usize) {
    let quoted = format!("\"{needle}\"");
    let Some(offset) = text.find(&quoted) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 2;
    (line, column)
}

fn json_matrix(rows: &[Vec<String>], text: &str, path: &str, name: &str) -> Result<Matrix<ExactScalar>> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != cols) {
        let (line, column) = position_of(text, name);
        return Err(parse_error(path, line, column, format!("`{name}` must be a nonempty rectangular list of rows")));
    }
    let mut data = Vec::with_capacity(rows.len());
    for row in rows {
        let mut out = Vec::with_capacity(cols);
        for s in row {
            out.push(s.parse::<ExactScalar>().map_err(|e| {
                let (line, column) = position_of(text, s);
                match e {
                    Error::ParseScalar { column: c, message, .. } => parse_error(path, line, column + c - 1, message),
                    other => other,
                }
            })?);
        }
        data.push(out);
    }
    Matrix::from_rows(data, cols)
}

fn matrix_strings(m: &Matrix<ExactScalar>) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// Writes `key:` followed by the rows of `m`, columns aligned.
pub fn write_matrix(out: &mut String, key: &str, m: &Matrix<ExactScalar>) {
    let cells = matrix_strings(m);
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let _ = writeln!(out, "{key}:");
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {}", padded.join(" "));
    }
}

impl FormFile {
    /// A standard form with the given coupling block.
    pub fn standard(flavor: Flavor, b: Matrix<ExactScalar>) -> Result<Self> {
        let (k, two_ell) = match flavor {
            Flavor::Supersymmetric => (b.rows(), b.cols()),
            Flavor::SkewSupersymmetric => (b.cols(), b.rows()),
        };
        if two_ell % 2 != 0 {
            return Err(Error::Shape(format!("symplectic side has odd size {two_ell}")));
        }
        Ok(FormFile { flavor, k, ell: two_ell / 2, b, even_block: None, odd_block: None })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {display}: {e}")))?;
        Self::parse(&text, &display)
    }

    /// `path` only labels error messages.
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return Self::parse_json(text, path);
        }
        let entries = parse_document(text, path)?;
        let find = |key: &str| entries.iter().find(|e| e.key.text == key);
        for e in &entries {
            if !["flavor", "k", "ell", "B", "even_block", "odd_block"].contains(&e.key.text.as_str()) {
                return Err(parse_error(path, e.key.line, 1, format!("unknown key `{}`", e.key.text)));
            }
        }
        let text_value = |key: &str| -> Result<&Token> {
            match find(key) {
                Some(Entry { value: Value::Text(t), .. }) => Ok(t),
                Some(Entry { key, .. }) => Err(parse_error(path, key.line, key.column, format!("`{}` needs a value", key.text))),
                None => Err(parse_error(path, 1, 1, format!("missing key `{key}`"))),
            }
        };
        let matrix = |key: &str| -> Result<Option<Matrix<ExactScalar>>> {
            match find(key) {
                Some(Entry { value: Value::Rows(rows), key }) => matrix_from_tokens(rows, key, path).map(Some),
                Some(Entry { key, .. }) => Err(parse_error(path, key.line, key.column, "matrix rows go on the following lines")),
                None => Ok(None),
            }
        };
        let flavor_token = text_value("flavor")?;
        let flavor: Flavor = flavor_token
            .text
            .parse()
            .map_err(|_| parse_error(path, flavor_token.line, flavor_token.column, "unknown flavor"))?;
        let number = |key: &str| -> Result<usize> {
            let t = text_value(key)?;
            t.text
                .parse()
                .map_err(|_| parse_error(path, t.line, t.column, format!("`{key}` must be a nonnegative integer")))
        };
        let (k, ell) = (number("k")?, number("ell")?);
        let b = matrix("B")?.ok_or_else(|| parse_error(path, 1, 1, "missing key `B`"))?;
        let form = FormFile { flavor, k, ell, b, even_block: matrix("even_block")?, odd_block: matrix("odd_block")? };
        form.check_shapes().map_err(|e| {
            let line = find("B").map_or(1, |e| e.key.line);
            parse_error(path, line, 1, e.to_string())
        })?;
        Ok(form)
    }

    fn parse_json(text: &str, path: &str) -> Result<Self> {
        let raw: FormJson = serde_json::from_str(text)
            .map_err(|e| parse_error(path, e.line(), e.column(), e.to_string()))?;
        let b = json_matrix(&raw.b, text, path, "B")?;
        let even_block = raw.even_block.as_deref().map(|m| json_matrix(m, text, path, "even_block")).transpose()?;
        let odd_block = raw.odd_block.as_deref().map(|m| json_matrix(m, text, path, "odd_block")).transpose()?;
        let form = FormFile { flavor: raw.flavor, k: raw.k, ell: raw.ell, b, even_block, odd_block };
        form.check_shapes().map_err(|e| {
            let (line, column) = position_of(text, "B");
            parse_error(path, line, column, e.to_string())
        })?;
        Ok(form)
    }

    fn check_shapes(&self) -> Result<()> {
        let (even, odd) = match self.flavor {
            Flavor::Supersymmetric => (self.k, 2 * self.ell),
            Flavor::SkewSupersymmetric => (2 * self.ell, self.k),
        };
        if self.b.shape() != (even, odd) {
            return Err(Error::Shape(format!(
                "B is {}x{}, expected {even}x{odd} for k = {}, ell = {}",
                self.b.rows(),
                self.b.cols(),
                self.k,
                self.ell
            )));
        }
        for (block, n, name) in [(&self.even_block, even, "even_block"), (&self.odd_block, odd, "odd_block")] {
            if let Some(m) = block {
                if m.shape() != (n, n) {
                    return Err(Error::Shape(format!("{name} must be {n}x{n}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_standard(&self) -> bool {
        self.even_block.is_none() && self.odd_block.is_none()
    }

    pub fn gram(&self) -> Result<GramForm> {
        let standard = make_standard_gram(self.b.clone(), self.flavor)?;
        if self.is_standard() {
            return Ok(standard);
        }
        GramForm::new(
            self.flavor,
            self.even_block.clone().unwrap_or_else(|| standard.even_block().clone()),
            self.odd_block.clone().unwrap_or_else(|| standard.odd_block().clone()),
            self.b.clone(),
        )
    }

    /// The `k x 2l` coupling block of the equivalent standard
    /// supersymmetric form.
    ///
    /// Non-standard blocks are normalized first; this fails when that needs
    /// an irrational change of basis.
    pub fn coupling_block(&self) -> Result<Matrix<ExactScalar>> {
        let g = self.gram()?;
        let g = if g.is_standard() {
            g
        } else {
            match normalize_gram(&g, ApproxContext::default())? {
                Normalization::Exact(n) => n.form,
                Normalization::Approx(_) => {
                    return Err(Error::Invalid(
                        "normalizing these blocks needs irrational square roots; supply a standard form".into(),
                    ))
                }
            }
        };
        match g.flavor() {
            Flavor::Supersymmetric => Ok(g.coupling().clone()),
            Flavor::SkewSupersymmetric => Ok(parity_reverse(&g)?.coupling().clone()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "flavor: {}", self.flavor);
        let _ = writeln!(out, "k: {}", self.k);
        let _ = writeln!(out, "ell: {}", self.ell);
        write_matrix(&mut out, "B", &self.b);
        if let Some(m) = &self.even_block {
            write_matrix(&mut out, "even_block", m);
        }
        if let Some(m) = &self.odd_block {
            write_matrix(&mut out, "odd_block", m);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let raw = FormJson {
            flavor: self.flavor,
            k: self.k,
            ell: self.ell,
            b: matrix_strings(&self.b),
            even_block: self.even_block.as_ref().map(matrix_strings),
            odd_block: self.odd_block.as_ref().map(matrix_strings),
        };
        serde_json::to_string_pretty(&raw).expect("form serializes")
    }
}

/// A pair `(X, Y)` written as the matrices `X` and `Y`.
pub fn transform_to_text(x: &Matrix<ExactScalar>, y: &Matrix<ExactScalar>) -> String {
    let mut out = String::new();
    write_matrix(&mut out, "X", x);
    write_matrix(&mut out, "Y", y);
    out
}

pub fn transform_from_text(text: &str, path: &str) -> Result<(Matrix<ExactScalar>, Matrix<ExactScalar>)> {
    let entries = parse_document(text, path)?;
    let get = |key: &str| -> Result<Matrix<ExactScalar>> {
        match entries.iter().find(|e| e.key.text == key) {
            Some(Entry { value: Value::Rows(rows), key }) => matrix_from_tokens(rows, key, path),
            Some(Entry { key, .. }) => Err(parse_error(path, key.line, key.column, "expected matrix rows")),
            None => Err(parse_error(path, 1, 1, format!("missing key `{key}`"))),
        }
    };
    Ok((get("X")?, get("Y")?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B5: &str = "# B5\nflavor: supersymmetric\nk: 3\nell: 2\nB:\n  1 0 0 0\n  0 1 0 0\n  0 0 1 0\n";

    #[test]
    fn parses_text() {
        let f = FormFile::parse(B5, "b5.form").unwrap();
        assert_eq!((f.flavor, f.k, f.ell), (Flavor::Supersymmetric, 3, 2));
        assert_eq!(f.b.shape(), (3, 4));
        assert_eq!(FormFile::parse(&f.to_text(), "x").unwrap(), f);
        assert_eq!(FormFile::parse(&f.to_json(), "x").unwrap(), f);
        assert_eq!(f.coupling_block().unwrap(), f.b);
    }

    #[test]
    fn reports_positions() {
        let bad = B5.replace("0 1 0 0", "0 1 0 1/0");
        match FormFile::parse(&bad, "b5.form") {
            Err(Error::Parse { line, column, .. }) => assert!(line == 7 && (9..=12).contains(&column)),
            other => panic!("{other:?}"),
        }
        let bad = B5.replace("  0 0 1 0", "  0 0 1");
        assert!(matches!(FormFile::parse(&bad, "p"), Err(Error::Parse { line: 8, column: 3, .. })));
        let bad = B5.replace("k: 3", "k: three");
        assert!(matches!(FormFile::parse(&bad, "p"), Err(Error::Parse { line: 3, column: 4, .. })));
        let bad = B5.replace("ell: 2", "ell: 1");
        assert!(matches!(FormFile::parse(&bad, "p"), Err(Error::Parse { line: 5, .. })));
        let json = "{\n  \"flavor\": \"supersymmetric\",\n  \"k\": 1,\n  \"ell\": 1,\n  \"B\": [[\"1\", \"2x\"]]\n}";
        assert!(matches!(FormFile::parse(json, "p"), Err(Error::Parse { line: 5, column: 17, .. })));
        assert!(matches!(FormFile::parse("{ \"k\": }", "p"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn skew_and_nonstandard_files() {
        let text = "flavor: skew-supersymmetric\nk: 1\nell: 1\nB:\n  1\n  0\n";
        let f = FormFile::parse(text, "p").unwrap();
        let g = f.gram().unwrap();
        assert_eq!(g.gram_matrix(), Matrix::parse(&[&["0", "1", "1"], &["-1", "0", "0"], &["-1", "0", "1"]]).unwrap());
        assert_eq!(f.coupling_block().unwrap().shape(), (1, 2));

        let text = "flavor: supersymmetric\nk: 1\nell: 1\nB:\n  2 0\neven_block:\n  4\n";
        let f = FormFile::parse(text, "p").unwrap();
        assert!(!f.is_standard());
        assert_eq!(f.coupling_block().unwrap(), Matrix::parse(&[&["1", "0"]]).unwrap());
    }

    #[test]
    fn transforms_round_trip() {
        let x = Matrix::parse(&[&["0", "1"], &["-1", "0"]]).unwrap();
        let y = Matrix::parse(&[&["1/2", "i"], &["0", "2"]]).unwrap();
        let text = transform_to_text(&x, &y);
        assert_eq!(transform_from_text(&text, "w").unwrap(), (x, y));
    }
}
