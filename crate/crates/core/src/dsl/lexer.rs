use super::DslError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    Ident(String),
    /// Source text of an unsigned or signed decimal literal.
    Number(String),
    Arrow,
    Sym(char),
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Token {
    pub tok: Tok,
    pub column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits one line (comment already included) into tokens with 1-based columns.
pub(super) fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), column });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, column });
            i += 2;
            continue;
        }
        let signed = c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit() || *d == '.');
        if c.is_ascii_digit() || c == '.' || signed {
            let (text, len) = scan_number(&chars[i..]).ok_or_else(|| DslError::Syntax {
                line: line_no,
                column,
                message: "malformed number".into(),
            })?;
            out.push(Token { tok: Tok::Number(text), column });
            i += len;
            continue;
        }
        if "=:+*/@(),".contains(c) {
            out.push(Token { tok: Tok::Sym(c), column });
            i += 1;
            continue;
        }
        return Err(DslError::Syntax { line: line_no, column, message: format!("unexpected character `{c}`") });
    }
    Ok(out)
}

/// `-?digits(.digits?)?([eE][+-]?digits)?` or `-?.digits(...)`.
fn scan_number(s: &[char]) -> Option<(String, usize)> {
    let mut i = 0;
    if s.first() == Some(&'-') {
        i += 1;
    }
    let int_start = i;
    while i < s.len() && s[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < s.len() && s[i] == '.' {
        i += 1;
        let frac_start = i;
        while i < s.len() && s[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return None;
    }
    if i < s.len() && (s[i] == 'e' || s[i] == 'E') {
        let mut j = i + 1;
        if j < s.len() && (s[j] == '+' || s[j] == '-') {
            j += 1;
        }
        let exp_start = j;
        while j < s.len() && s[j].is_ascii_digit() {
            j += 1;
        }
        if j == exp_start {
            return None;
        }
        i = j;
    }
    // a number running straight into a name, e.g. `2TF`
    if i < s.len() && is_ident_char(s[i]) {
        return None;
    }
    Some((s[..i].iter().collect(), i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, 1).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn reaction_line() {
        assert_eq!(
            toks("reaction r1: 2*TF -> TF2 @ ma(k1) # dimer"),
            vec![
                Tok::Ident("reaction".into()),
                Tok::Ident("r1".into()),
                Tok::Sym(':'),
                Tok::Number("2".into()),
                Tok::Sym('*'),
                Tok::Ident("TF".into()),
                Tok::Arrow,
                Tok::Ident("TF2".into()),
                Tok::Sym('@'),
                Tok::Ident("ma".into()),
                Tok::Sym('('),
                Tok::Ident("k1".into()),
                Tok::Sym(')'),
            ]
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(
            toks("-1.5e-3 .5 7."),
            vec![Tok::Number("-1.5e-3".into()), Tok::Number(".5".into()), Tok::Number("7.".into())]
        );
        assert!(tokenize("1e", 3).is_err());
        assert!(tokenize("2TF", 3).is_err());
    }

    #[test]
    fn columns_count_characters() {
        let t = tokenize("  α", 4).unwrap_err();
        assert_eq!(t, DslError::Syntax { line: 4, column: 3, message: "unexpected character `α`".into() });
    }
}
