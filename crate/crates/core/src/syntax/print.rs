use super::{Formula, Term};

// binding strength of the printed form; operands below the required level
// get parentheses
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

pub fn print_term(t: &Term) -> String {
    match t {
        Term::Var(x) | Term::Const(x) => x.clone(),
        Term::App(f, args) => {
            let args: Vec<String> = args.iter().map(print_term).collect();
            format!("{f}({})", args.join(", "))
        }
    }
}

/// ASCII rendering in the input grammar. `∧`, `↔` and `∃` patterns are shown
/// with their sugar; the output parses back to the same AST.
pub fn print_formula(a: &Formula) -> String {
    render(a, QUANT)
}

fn wrap(s: String, level: u8, required: u8) -> String {
    if level < required {
        format!("({s})")
    } else {
        s
    }
}

fn render(a: &Formula, required: u8) -> String {
    let (s, level) = render_inner(a);
    wrap(s, level, required)
}

fn as_exists(a: &Formula) -> Option<(&str, &Formula)> {
    let Formula::Not(inner) = a else { return None };
    let Formula::Forall(x, body) = inner.as_ref() else { return None };
    let Formula::Not(body) = body.as_ref() else { return None };
    Some((x, body))
}

fn as_and(a: &Formula) -> Option<(&Formula, &Formula)> {
    let Formula::Not(inner) = a else { return None };
    let Formula::Imp(l, r) = inner.as_ref() else { return None };
    let Formula::Not(r) = r.as_ref() else { return None };
    Some((l, r))
}

fn render_inner(a: &Formula) -> (String, u8) {
    if let Some((l, r)) = a.as_iff() {
        return (format!("{} <-> {}", render(l, IFF), render(r, IMP)), IFF);
    }
    if let Some((x, body)) = as_exists(a) {
        return (format!("exists {x}. {}", render(body, QUANT)), QUANT);
    }
    if let Some((l, r)) = as_and(a) {
        return (format!("{} & {}", render(l, AND), render(r, UNARY)), AND);
    }
    match a {
        Formula::Pred(p, args) => {
            let args: Vec<String> = args.iter().map(print_term).collect();
            (format!("{p}({})", args.join(", ")), ATOM)
        }
        Formula::Eq(l, r) => (format!("{} = {}", print_term(l), print_term(r)), ATOM),
        Formula::Exists(t) => (format!("E! {}", print_term(t)), ATOM),
        Formula::Not(b) => (format!("~{}", render(b, UNARY)), UNARY),
        Formula::Imp(l, r) => (
            format!("{} -> {}", render(l, IMP + 1), render(r, IMP)),
            IMP,
        ),
        Formula::Forall(x, b) => (format!("forall {x}. {}", render(b, QUANT)), QUANT),
        Formula::Iq(x, l, r) => (
            format!("I {x} [{}, {}]", render(l, QUANT), render(r, QUANT)),
            ATOM,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula_in, Signature};

    fn roundtrip(text: &str) {
        let mut sig = Signature::new();
        let a = parse_formula_in(text, &mut sig, &[]).unwrap();
        let printed = print_formula(&a);
        let b = parse_formula_in(&printed, &mut sig, &[]).unwrap();
        assert_eq!(a, b, "{text} printed as {printed}");
    }

    #[test]
    fn prints_sugar() {
        let mut sig = Signature::new();
        let a = parse_formula_in("forall x. (F(x) <-> x = b)", &mut sig, &[]).unwrap();
        assert_eq!(print_formula(&a), "forall x. F(x) <-> x = b");
        let a = parse_formula_in("~a = b & E! f(a)", &mut sig, &[]).unwrap();
        assert_eq!(print_formula(&a), "~a = b & E! f(a)");
    }

    #[test]
    fn quantifier_operands_are_wrapped() {
        roundtrip("(forall x. F(x)) -> G(a)");
        roundtrip("~(forall x. F(x)) -> G(a)");
        roundtrip("~forall x. F(x) -> G(a)");
        roundtrip("(exists x. F(x)) & G(a)");
        roundtrip("I x [F(x) -> G(x), I y [G(y), x = y]] <-> (a = b <-> E! b)");
        roundtrip("(F(a) -> F(b)) -> F(c)");
        roundtrip("F(a) | F(b) | F(c)");
    }
}
