//! Deterministic automaton for `X*`, obtained by subset construction from the
//! flower automaton of `X`.

use std::collections::{BTreeSet, HashMap};

use crate::word::{FiniteLanguage, Word};

/// Complete DFA over the language's letters. State 0 is initial; a sink state
/// absorbs dead runs and letters outside the alphabet.
#[derive(Clone, Debug)]
pub struct StarAutomaton {
    letters: Vec<u8>,
    slot: [Option<u8>; 256],
    trans: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    sink: usize,
}

impl StarAutomaton {
    pub fn build(x: &FiniteLanguage) -> Self {
        let letters = x.letters().to_vec();
        let mut slot = [None; 256];
        for (i, &c) in letters.iter().enumerate() {
            slot[c as usize] = Some(i as u8);
        }
        // Flower states: 0 is the center, then one state per interior position.
        // edges[state][letter] -> targets
        let mut edges: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); letters.len()]];
        for w in x.iter().filter(|w| !w.is_empty()) {
            let bytes = w.as_bytes();
            let mut prev = 0;
            for (pos, &c) in bytes.iter().enumerate() {
                let next = if pos + 1 == bytes.len() {
                    0
                } else {
                    edges.push(vec![Vec::new(); letters.len()]);
                    edges.len() - 1
                };
                let li = slot[c as usize].expect("letters validated by the language") as usize;
                edges[prev][li].push(next);
                prev = next;
            }
        }

        let start: BTreeSet<usize> = BTreeSet::from([0]);
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut sets = vec![start];
        let mut trans: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(letters.len());
            for li in 0..letters.len() {
                let target: BTreeSet<usize> = sets[i]
                    .iter()
                    .flat_map(|&q| edges[q][li].iter().copied())
                    .collect();
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        sets.push(target.clone());
                        ids.insert(target, sets.len() - 1);
                        sets.len() - 1
                    }
                };
                row.push(id);
            }
            trans.push(row);
            i += 1;
        }
        let sink = match ids.get(&BTreeSet::new()) {
            Some(&s) => s,
            None => {
                trans.push(vec![trans.len(); letters.len()]);
                sets.push(BTreeSet::new());
                trans.len() - 1
            }
        };
        let accepting = sets.iter().map(|s| s.contains(&0)).collect();
        StarAutomaton {
            letters,
            slot,
            trans,
            accepting,
            sink,
        }
    }

    pub fn state_count(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    /// Next state; letters outside the alphabet lead to the sink.
    pub fn step(&self, state: usize, c: u8) -> usize {
        match self.slot[c as usize] {
            Some(li) => self.trans[state][li as usize],
            None => self.sink,
        }
    }

    pub fn run(&self, state: usize, input: &[u8]) -> usize {
        input.iter().fold(state, |s, &c| self.step(s, c))
    }

    pub fn accepts(&self, u: &Word) -> bool {
        self.accepting[self.run(0, u.as_bytes())]
    }
}

/// `u ∈ X*`.
pub fn star_membership(m: &StarAutomaton, u: &Word) -> bool {
    m.accepts(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::factorizations;
    use crate::corpus;

    #[test]
    fn single_letter_loop() {
        let x = FiniteLanguage::parse("a", &["a"]).unwrap();
        let m = StarAutomaton::build(&x);
        // loop state plus the sink
        assert_eq!(m.state_count(), 2);
        assert!(m.accepts(&Word::power(b'a', 5)));
        assert!(m.accepts(&Word::empty()));
    }

    #[test]
    fn even_powers() {
        let x = FiniteLanguage::parse("a", &["a^2"]).unwrap();
        let m = StarAutomaton::build(&x);
        assert_eq!(m.state_count(), 3);
        for k in 0..10 {
            assert_eq!(m.accepts(&Word::power(b'a', k)), k % 2 == 0);
        }
    }

    #[test]
    fn products_of_code_words() {
        let x = corpus::order8().language();
        let m = StarAutomaton::build(&x);
        assert!(star_membership(&m, &Word::parse_powers("a^3baba^2").unwrap()));
        for w in x.iter() {
            assert!(m.accepts(w));
        }
        assert!(!m.accepts(&Word::from("c")));
    }

    #[test]
    fn agrees_with_factorization_search() {
        for entry in corpus::all() {
            let x = entry.language();
            let m = StarAutomaton::build(&x);
            let letters = x.letters().to_vec();
            let max_len = if letters.len() > 2 { 8 } else { 12 };
            let mut frontier = vec![Vec::<u8>::new()];
            for _ in 0..=max_len {
                for u in &frontier {
                    let w = Word::from_bytes(u.clone());
                    let dp = !factorizations(&w, &x, 1).is_empty();
                    assert_eq!(m.accepts(&w), dp, "{} on {}", entry.name, w);
                }
                frontier = frontier
                    .iter()
                    .flat_map(|u| {
                        letters.iter().map(move |&c| {
                            let mut v = u.clone();
                            v.push(c);
                            v
                        })
                    })
                    .collect();
            }
        }
    }
}
