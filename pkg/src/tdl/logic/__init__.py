"""The tense language, sequent calculi, semantics and proof search."""
