#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gml/formula.hpp"
#include "gml/kripke.hpp"

namespace gml {

/// Torus tiling problem: assign one tile to every cell of the 2^n x 2^n torus
/// so that horizontally adjacent cells (with wrap-around) form a pair in
/// `horiz`, vertically adjacent ones a pair in `vert`.
struct TilingProblem {
  std::vector<std::string> tiles;
  std::vector<std::pair<std::string, std::string>> horiz;  // (left, right)
  std::vector<std::pair<std::string, std::string>> vert;   // (below, above)
};

/// A problem plus the initial condition: the first n cells of column 0 must
/// carry the listed tiles. The torus side is 2^n with n = |initial|.
struct TilingInstance {
  TilingProblem problem;
  int n = 1;
  std::vector<std::string> initial;
};

/// Total tile assignment; cells[h * side + v] is the tile at position (h, v).
struct TilingSolution {
  int side = 0;
  std::vector<std::string> cells;

  const std::string& at(int h, int v) const {
    return cells[static_cast<std::size_t>(h) * side + v];
  }
  std::string& at(int h, int v) {
    return cells[static_cast<std::size_t>(h) * side + v];
  }
};

/// True when tau is a well-formed solution of inst: right side, every cell
/// assigned a declared tile, all wrap-around adjacency pairs allowed, and
/// column 0 starting with the initial tiles. Never throws on a malformed tau;
/// the instance itself is validated and rejected with std::invalid_argument.
bool check_tiling(const TilingInstance& inst, const TilingSolution& tau);

/// The named pieces of the satisfiability encoding of a tiling instance.
/// Vocabulary: inn/lan split worlds into torus cells and their connecting
/// lanterns, wht/bl color the cells like a chessboard, v0../h0.. hold the
/// cell position in binary (least significant bit first), vbw/hbw/vwb/hwb
/// mark what step a lantern performs (axis, then source color), and every
/// tile contributes one variable.
struct TorusEncoding {
  Formula first_cell;   // the evaluation world: an inner white cell at (0,0)
  Formula partition;    // lantern <-> not inner <-> no predecessor
  Formula chessboard;   // exactly one color, white iff v0 <-> h0
  Formula torus_size;   // inner worlds see exactly 2^(2n) successors
  Formula pseudo_uniqueness;  // per color, illuminated cells share a position
  Formula equal_h, equal_v;   // illuminated colors agree on the fixed axis
  Formula add_one_vbw, add_one_hbw, add_one_vwb, add_one_hwb;  // +1 adders
  Formula succ_vbw, succ_hbw, succ_vwb, succ_hwb;  // full per-kind duties
  Formula successors;   // lanterns do a flagged duty; cells have flagged witnesses of all four kinds
  Formula tile_cover;   // each inner world carries exactly one tile
  Formula init_cond;    // column 0 starts with the initial tiles
  Formula tiling_rules; // illuminated neighbor tiles respect horiz/vert
  Formula torus;        // first_cell plus the cell-structure block everywhere
  Formula tiling;       // the tile block everywhere
  Formula reduction;    // torus & tiling
};

/// Builds every piece. "Everywhere" blocks are spelled with the connected
/// euclidean definition of the universal modality (f & box box ibox f), so
/// `reduction` is a single local formula: it is satisfiable over euclidean
/// (even serial euclidean) frames exactly when the instance has a solution.
/// Throws std::invalid_argument on malformed instances and when 2^(2n) would
/// not fit in a grade literal.
TorusEncoding encode_torus_parts(const TilingInstance& inst);

/// encode_torus_parts(inst).reduction.
Formula encode_torus(const TilingInstance& inst);

/// The hand-built witness model for a solved instance: one reflexive
/// universal clique with a world per cell (position (h,v) at index
/// h * side + v, so the origin cell is world 0), plus one lantern per cell
/// and kind, illuminating exactly the source and target cells of that kind's
/// step through the given cell. The result satisfies encode_torus(inst) at
/// world 0 and is connected, euclidean and serial. Requires
/// check_tiling(inst, tau) and n <= 8 (world count grows as 5 * 4^n).
KripkeStructure build_intended_model(const TilingInstance& inst, const TilingSolution& tau);

/// Reads a solution back out of a model of the encoding: every world where
/// `inn` holds contributes its position bits and its tile variable. Throws
/// std::runtime_error when two worlds share a position, a position is
/// missing, or a world carries no or several tiles; any of these means the
/// model does not actually satisfy the encoding and signals an encoder or
/// solver bug.
TilingSolution decode_tiling(const KripkeStructure& a, const TilingInstance& inst);

/// Rewrites a plain dia/box formula into one of modal depth at most 1 whose
/// global satisfiability agrees with the input's: modal subformulas nested
/// inside another modality are replaced, innermost first, by fresh variables
/// q, q0, ... tied to them with appended biconditional conjuncts. Rejects
/// graded and converse modalities with std::invalid_argument.
Formula flatten_modal_depth(const Formula& f);

/// For a formula of modal depth at most 1 in the plain dia/box language, the
/// companion formula whose global satisfiability over reflexive transitive
/// frames agrees with the input's over arbitrary frames. Every world gets
/// exactly one of four fresh layer variables c0..c3 and each modality is
/// rerouted layer by layer, alternating forward and converse steps so that a
/// model may store every second tree edge inverted. Requires the input's
/// variables to avoid c0..c3.
Formula reduce_global_k_to_transitive(const Formula& f);

/// The very same formula also works over euclidean frames; returns exactly
/// reduce_global_k_to_transitive(f).
Formula reduce_global_k_to_k5(const Formula& f);

enum class InvertedTreeMode { Transitive, Euclidean };

/// The witness shape for the layer translation, built from a tree (edges
/// parent to child, exactly one root, no cycles): worlds keep their
/// valuations and gain c_(depth mod 4); tree edges out of odd depths are
/// inverted. Transitive mode then closes reflexively and transitively;
/// euclidean mode instead turns the odd layers into one clique that the
/// even-layer worlds (lanterns) illuminate through their kept and inverted
/// edges. Throws std::invalid_argument when the input is not a tree.
KripkeStructure build_inverted_tree_model(const KripkeStructure& tree, InvertedTreeMode mode);

/// Text format, one directive per line, '#' comments: a single
/// "tiles a b c" line declaring the tiles, "h a b" / "v a b" lines listing
/// the horizontal and vertical pairs, and a single "init a b" line whose
/// length fixes n. ParseError (with line) on format errors,
/// std::invalid_argument on bad tile sets.
TilingInstance parse_tiling(const std::string& text);
std::string render_tiling(const TilingInstance& inst);

}  // namespace gml
