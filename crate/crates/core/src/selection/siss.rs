use super::books::PermutationBook;
use super::metric::SelectionMetric;
use super::pilots::{pilot_symbols, PilotBook};
use super::{select_best, Selected};
use crate::error::{Error, Result};
use crate::shaping::Symbol4D;

/// Symbol-interleaving selection: candidate `i` is `pilots(i) ‖ perm_i(s)`.
///
/// The metric scores the interleaved payload only.
pub fn siss_encode(
    symbols: &[Symbol4D],
    book: &PermutationBook,
    pilots: &PilotBook,
    metric: &dyn SelectionMetric,
) -> Result<Selected> {
    if symbols.len() != book.n() {
        return Err(Error::LengthMismatch {
            what: "SISS payload",
            expected: book.n(),
            actual: symbols.len(),
        });
    }
    let count = pilot_symbols(book.n_t());
    select_best(book.n_t(), |i| {
        let payload = book.interleave(i, symbols);
        let cost = metric.cost(&payload)?.cost;
        let mut block = pilots.encode_index(i, count);
        block.extend(payload);
        Ok((block, cost))
    })
}

/// Detects the pilot index and deinterleaves the payload.
pub fn siss_decode(
    received: &[Symbol4D],
    book: &PermutationBook,
    pilots: &PilotBook,
) -> Result<(usize, Vec<Symbol4D>)> {
    let count = pilot_symbols(book.n_t());
    if received.len() != count + book.n() {
        return Err(Error::LengthMismatch {
            what: "SISS received block",
            expected: count + book.n(),
            actual: received.len(),
        });
    }
    let (head, payload) = received.split_at(count);
    let index = pilots.decode_checked(head, book.n_t())?;
    Ok((index, book.deinterleave(index, payload)))
}
