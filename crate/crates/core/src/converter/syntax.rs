//! Sentence-level transforms: auxiliary restoration, preposition, conjunction
//! and conditional-marker insertion, verb-final reordering and causative
//! replacement. Each transform only fires when its lexical preconditions are
//! met; otherwise the sentence is left alone.

use std::collections::BTreeSet;

use super::disambiguate::is_nominal;
use super::verbs::{Mood, VerbFeatures, VerbLexicon};
use super::Slot;
use crate::lexicon::Vocabulary;

pub const AUXILIARY: &str = "است";
pub const DESTINATION_PREPOSITION: &str = "به";
pub const CONJUNCTION: &str = "و";
pub const CONDITIONAL: &str = "اگر";
const OBJECT_MARKER: &str = "را";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub index: usize,
    pub rule: &'static str,
    pub before: String,
    pub after: String,
}

pub struct Syntax<'a> {
    pub vocab: &'a Vocabulary,
    pub verbs: &'a VerbLexicon,
    pub destinations: &'a BTreeSet<String>,
}

fn render(slots: &[Slot]) -> String {
    slots.iter().map(|s| s.text.as_str()).collect::<Vec<_>>().join(" ")
}

impl Syntax<'_> {
    fn is_verb(&self, s: &Slot) -> bool {
        s.editable() && (self.verbs.get(&s.text).is_some() || self.vocab.has_tag(&s.text, "V"))
    }

    fn features(&self, s: &Slot) -> Option<&VerbFeatures> {
        self.verbs.get(&s.text).map(|e| &e.features)
    }

    fn is_noun(&self, s: &Slot) -> bool {
        s.editable() && self.vocab.has_tag(&s.text, "N")
    }

    fn is_destination(&self, s: &Slot) -> bool {
        s.editable() && self.destinations.contains(&s.text)
    }

    /// Maximal runs of verb tokens, e.g. a participle and its auxiliary.
    fn units(&self, slots: &[Slot]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < slots.len() {
            if self.is_verb(&slots[i]) {
                let s = i;
                while i < slots.len() && self.is_verb(&slots[i]) {
                    i += 1;
                }
                out.push((s, i));
            } else {
                i += 1;
            }
        }
        out
    }

    /// Features of the first verb in the unit that has a lexicon entry.
    fn head<'s>(&'s self, slots: &'s [Slot], unit: (usize, usize)) -> Option<&'s VerbFeatures> {
        slots[unit.0..unit.1].iter().find_map(|s| self.features(s))
    }

    /// Runs all transforms once, in order. `allow_reorder` is false when the
    /// sentence contains an idiom.
    pub fn apply(&self, slots: &mut Vec<Slot>, allow_reorder: bool) -> Vec<Event> {
        let mut events = Vec::new();
        self.restore_auxiliary(slots, &mut events);
        self.insert_destination_preposition(slots, &mut events);
        self.insert_conjunction(slots, &mut events);
        self.insert_conditional(slots, &mut events);
        if allow_reorder {
            self.verb_final(slots, &mut events);
        }
        self.replace_causative(slots, &mut events);
        events
    }

    fn record(events: &mut Vec<Event>, index: usize, rule: &'static str, before: String, slots: &[Slot]) {
        events.push(Event { index, rule, before, after: render(slots) });
    }

    fn restore_auxiliary(&self, slots: &mut Vec<Slot>, events: &mut Vec<Event>) {
        let Some(last) = slots.len().checked_sub(1) else { return };
        if self.is_verb(&slots[last]) && self.features(&slots[last]).is_some_and(VerbFeatures::is_participle) {
            let before = render(slots);
            slots.push(Slot::inserted(AUXILIARY));
            Self::record(events, last, "syntax.auxiliary", before, slots);
        }
    }

    fn destination_site(&self, slots: &[Slot]) -> Option<usize> {
        for unit in self.units(slots) {
            let takes_destination =
                slots[unit.0..unit.1].iter().any(|s| self.features(s).is_some_and(|f| f.destination));
            if !takes_destination {
                continue;
            }
            if let Some(next) = slots.get(unit.1) {
                if self.is_destination(next) {
                    return Some(unit.1);
                }
                // a pronoun after the verb that is not its subject is a recipient
                let person = self.head(slots, unit).and_then(|f| f.person);
                if let Some(p) = person {
                    if next.editable()
                        && self.vocab.has_tag(&next.text, "PRO")
                        && !self.vocab.has_tag(&next.text, p.as_str())
                    {
                        return Some(unit.1);
                    }
                }
            }
            if let Some(k) = unit.0.checked_sub(1) {
                if self.is_destination(&slots[k]) && (k == 0 || slots[k - 1].text != DESTINATION_PREPOSITION) {
                    return Some(k);
                }
            }
        }
        None
    }

    fn insert_destination_preposition(&self, slots: &mut Vec<Slot>, events: &mut Vec<Event>) {
        for _ in 0..slots.len() {
            let Some(k) = self.destination_site(slots) else { break };
            let before = render(slots);
            slots.insert(k, Slot::inserted(DESTINATION_PREPOSITION));
            Self::record(events, k, "syntax.destination-preposition", before, slots);
        }
    }

    fn insert_conjunction(&self, slots: &mut Vec<Slot>, events: &mut Vec<Event>) {
        let mut i = 2;
        while i < slots.len() {
            let imperative =
                self.is_verb(&slots[i]) && self.features(&slots[i]).is_some_and(VerbFeatures::is_imperative);
            if imperative && self.is_noun(&slots[i - 1]) && self.is_noun(&slots[i - 2]) {
                let before = render(slots);
                slots.insert(i - 1, Slot::inserted(CONJUNCTION));
                Self::record(events, i - 1, "syntax.conjunction", before, slots);
                i += 1;
            }
            i += 1;
        }
    }

    fn insert_conditional(&self, slots: &mut Vec<Slot>, events: &mut Vec<Event>) {
        if slots.is_empty() || !self.is_verb(&slots[0]) {
            return;
        }
        if !self.features(&slots[0]).is_some_and(VerbFeatures::is_subjunctive) {
            return;
        }
        let present_later = slots[1..]
            .iter()
            .any(|s| self.is_verb(s) && self.features(s).is_some_and(|f| f.mood == Some(Mood::Present)));
        if !present_later {
            return;
        }
        let complement_end = match (slots.get(1), slots.get(2)) {
            (Some(p), Some(n))
                if p.text == DESTINATION_PREPOSITION && n.editable() && is_nominal(self.vocab, &n.text) =>
            {
                3
            }
            (Some(n), _) if self.is_destination(n) => 2,
            _ => 1,
        };
        let before = render(slots);
        let verb = slots.remove(0);
        slots.insert(complement_end - 1, verb);
        slots.insert(0, Slot::inserted(CONDITIONAL));
        Self::record(events, 0, "syntax.conditional", before, slots);
    }

    fn verb_final(&self, slots: &mut Vec<Slot>, events: &mut Vec<Event>) {
        let units = self.units(slots);
        let [unit] = units[..] else { return };
        if unit.1 == slots.len() {
            return;
        }
        let before = render(slots);
        let person = self.head(slots, unit).and_then(|f| f.person);
        let mut after: Vec<Slot> = slots.drain(unit.1..).collect();
        let verb: Vec<Slot> = slots.drain(unit.0..).collect();

        // a bare subject pronoun left after the verb moves to the front
        let subject = person.and_then(|p| {
            (0..after.len()).find(|&i| {
                let s = &after[i];
                s.editable()
                    && self.vocab.has_tag(&s.text, "PRO")
                    && self.vocab.has_tag(&s.text, p.as_str())
                    && (i == 0 || !self.vocab.has_tag(&after[i - 1].text, "PREP"))
                    && after.get(i + 1).is_none_or(|n| n.text != OBJECT_MARKER)
            })
        });
        if let Some(i) = subject {
            let pronoun = after.remove(i);
            slots.insert(0, pronoun);
        }
        slots.extend(after);
        slots.extend(verb);
        Self::record(events, unit.0, "syntax.verb-final", before, slots);
    }

    fn replace_causative(&self, slots: &mut [Slot], events: &mut Vec<Event>) {
        for i in 0..slots.len() {
            if !self.is_verb(&slots[i]) {
                continue;
            }
            let Some(base) = self.features(&slots[i]).and_then(|f| f.causative_of.clone()) else { continue };
            if base == slots[i].text {
                continue;
            }
            let before = render(slots);
            slots[i].text = base;
            Self::record(events, i, "syntax.causative", before, slots);
        }
    }
}
