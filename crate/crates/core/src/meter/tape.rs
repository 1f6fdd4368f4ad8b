use super::{Footprint, MeterError, SpaceMeter, Surface, TapeId};

pub type Symbol = char;

/// The blank symbol.
pub const BLANK: Symbol = '⊠';

/// A finite tape alphabet. Always contains [`BLANK`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        let mut symbols: Vec<Symbol> = symbols.into_iter().collect();
        if !symbols.contains(&BLANK) {
            symbols.push(BLANK);
        }
        symbols.dedup();
        Alphabet { symbols }
    }

    /// `{0, 1, ⊠}`.
    pub fn binary() -> Self {
        Self::new(['0', '1'])
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.symbols.contains(&s)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Self::binary()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    L,
    R,
    S,
}

/// A one-way-infinite work tape whose visited cells are charged to a meter.
pub struct MeteredTape<'m> {
    alphabet: Alphabet,
    cells: Vec<Symbol>,
    head: usize,
    footprint: Footprint<'m>,
}

impl<'m> MeteredTape<'m> {
    pub fn new(meter: &'m SpaceMeter, alphabet: Alphabet) -> Self {
        MeteredTape {
            alphabet,
            cells: Vec::new(),
            head: 0,
            footprint: Footprint::new(meter, Surface::Work),
        }
    }

    pub fn id(&self) -> TapeId {
        self.footprint.id()
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Cells charged so far by this tape.
    pub fn charged(&self) -> usize {
        self.footprint.extent()
    }

    pub fn read(&self) -> Symbol {
        self.cells.get(self.head).copied().unwrap_or(BLANK)
    }

    fn visit(&mut self, pos: usize) {
        if pos >= self.cells.len() {
            self.cells.resize(pos + 1, BLANK);
        }
        self.footprint.extend_to(pos + 1);
    }

    /// Writes under the head, moves, and returns the symbol under the new
    /// head position. The step is rejected without side effects if it would
    /// move left of cell 0.
    pub fn step(&mut self, write: Symbol, mv: Move) -> Result<Symbol, MeterError> {
        if !self.alphabet.contains(write) {
            return Err(MeterError::SymbolNotInAlphabet(write));
        }
        if mv == Move::L && self.head == 0 {
            return Err(MeterError::MoveLeftOfOrigin);
        }
        let at = self.head;
        self.visit(at);
        self.cells[at] = write;
        match mv {
            Move::L => self.head -= 1,
            Move::R => self.head += 1,
            Move::S => {}
        }
        let now = self.head;
        self.visit(now);
        Ok(self.read())
    }

    /// Contents up to the last non-blank cell.
    pub fn contents(&self) -> String {
        let end = self
            .cells
            .iter()
            .rposition(|&c| c != BLANK)
            .map_or(0, |p| p + 1);
        self.cells[..end].iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_tape_charges_nothing() {
        let meter = SpaceMeter::new();
        let tape = MeteredTape::new(&meter, Alphabet::binary());
        assert_eq!(tape.head(), 0);
        assert_eq!(meter.peak_cells(), 0);
        assert_eq!(tape.read(), BLANK);
    }

    #[test]
    fn one_write_charges_one_cell() {
        let meter = SpaceMeter::new();
        let mut tape = MeteredTape::new(&meter, Alphabet::binary());
        tape.step('1', Move::S).unwrap();
        assert_eq!(meter.peak_cells(), 1);
    }

    #[test]
    fn write_and_move_right() {
        let meter = SpaceMeter::new();
        let mut tape = MeteredTape::new(&meter, Alphabet::binary());
        let under = tape.step('1', Move::R).unwrap();
        assert_eq!(under, BLANK);
        assert_eq!(tape.head(), 1);
        assert_eq!(tape.charged(), 2);
        assert_eq!(tape.contents(), "1");
    }

    #[test]
    fn blank_write_stays() {
        let meter = SpaceMeter::new();
        let mut tape = MeteredTape::new(&meter, Alphabet::binary());
        tape.step('1', Move::R).unwrap();
        tape.step(BLANK, Move::S).unwrap();
        assert_eq!(tape.head(), 1);
    }

    #[test]
    fn left_of_origin_is_rejected() {
        let meter = SpaceMeter::new();
        let mut tape = MeteredTape::new(&meter, Alphabet::binary());
        assert_eq!(tape.step('1', Move::L), Err(MeterError::MoveLeftOfOrigin));
        assert_eq!(meter.peak_cells(), 0);
        assert_eq!(
            tape.step('7', Move::S),
            Err(MeterError::SymbolNotInAlphabet('7'))
        );
    }

    #[test]
    fn tapes_on_one_meter_add_up() {
        let meter = SpaceMeter::new();
        let mut a = MeteredTape::new(&meter, Alphabet::binary());
        let mut b = MeteredTape::new(&meter, Alphabet::binary());
        for _ in 0..2 {
            a.step('1', Move::R).unwrap();
        }
        a.step('0', Move::S).unwrap();
        b.step('0', Move::R).unwrap();
        b.step('1', Move::S).unwrap();
        assert_eq!(a.charged(), 3);
        assert_eq!(b.charged(), 2);
        assert!(meter.peak_cells() >= 5);
    }

    #[test]
    fn revisits_are_not_recharged() {
        let meter = SpaceMeter::new();
        let mut tape = MeteredTape::new(&meter, Alphabet::binary());
        for _ in 0..3 {
            tape.step('1', Move::R).unwrap();
        }
        for _ in 0..3 {
            tape.step('0', Move::L).unwrap();
        }
        assert_eq!(tape.charged(), 4);
        assert_eq!(meter.peak_cells(), 4);
    }
}
