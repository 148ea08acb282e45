use alloc::boxed::Box;

use super::Regex;

impl Regex {
    /// Applies language-preserving rewrites bottom-up until nothing changes.
    ///
    /// Rules: `R+R → R`, `∅+R → R`, `R+∅ → R`, `Rε → R`, `εR → R`,
    /// `R∅ → ∅`, `∅R → ∅`, `(R*)* → R*`, `(R?)* → R*`, `(R?)? → R?`,
    /// `(R*)? → R*`, `ε* → ε`, `ε? → ε`, `∅* → ε`, `∅? → ε`.
    /// Holes are opaque, so each rule is valid for every hole filling.
    /// Never increases [`Regex::size`].
    pub fn simplify(&self) -> Regex {
        let mut cur = simplify_once(self);
        loop {
            let next = simplify_once(&cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

fn simplify_once(r: &Regex) -> Regex {
    match r {
        Regex::Union(a, b) => {
            let (a, b) = (simplify_once(a), simplify_once(b));
            match (a, b) {
                (Regex::Empty, x) | (x, Regex::Empty) => x,
                (a, b) if a == b => a,
                (a, b) => Regex::Union(Box::new(a), Box::new(b)),
            }
        }
        Regex::Concat(a, b) => {
            let (a, b) = (simplify_once(a), simplify_once(b));
            match (a, b) {
                (Regex::Empty, _) | (_, Regex::Empty) => Regex::Empty,
                (Regex::Epsilon, x) | (x, Regex::Epsilon) => x,
                (a, b) => Regex::Concat(Box::new(a), Box::new(b)),
            }
        }
        Regex::Star(a) => match simplify_once(a) {
            Regex::Epsilon | Regex::Empty => Regex::Epsilon,
            Regex::Star(x) | Regex::Question(x) => Regex::Star(x),
            x => Regex::Star(Box::new(x)),
        },
        Regex::Question(a) => match simplify_once(a) {
            Regex::Epsilon | Regex::Empty => Regex::Epsilon,
            Regex::Star(x) => Regex::Star(x),
            Regex::Question(x) => Regex::Question(x),
            x => Regex::Question(Box::new(x)),
        },
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Alphabet;

    fn p(s: &str) -> Regex {
        Regex::parse(s, &Alphabet::new(b"ab").unwrap()).unwrap()
    }

    #[test]
    fn listed_rewrites() {
        assert_eq!(p("a**").simplify(), p("a*"));
        assert_eq!(p("a@epsilon").simplify(), p("a"));
        assert_eq!(p("@epsilona").simplify(), p("a"));
        assert_eq!(p("a@empty").simplify(), Regex::Empty);
        assert_eq!(p("@empty+b").simplify(), p("b"));
        assert_eq!(p("(a+b)+(a+b)").simplify(), p("a+b"));
        assert_eq!(p("a??").simplify(), p("a?"));
        assert_eq!(p("a*?").simplify(), p("a*"));
        assert_eq!(p("a?*").simplify(), p("a*"));
        assert_eq!(p("@epsilon*").simplify(), Regex::Epsilon);
        assert_eq!(p("@empty*").simplify(), Regex::Epsilon);
    }

    #[test]
    fn reaches_fixpoint_through_cascades() {
        // (ε + ε)* needs the union rule before the star rule fires.
        assert_eq!(p("(@epsilon+@epsilon)*b").simplify(), p("b"));
        assert_eq!(p("((a*)?)*").simplify(), p("a*"));
    }

    #[test]
    fn holes_are_opaque() {
        let t = Regex::union(Regex::Hole(0), Regex::Hole(1));
        assert_eq!(t.simplify(), t);
        let t = Regex::star(Regex::star(Regex::Hole(0)));
        assert_eq!(t.simplify(), Regex::star(Regex::Hole(0)));
    }
}
