#pragma once

#include <map>
#include <string>
#include <vector>

#include "homconf/cochain.hpp"
#include "homconf/deriv.hpp"

namespace homconf {

// Parsed contents of one input file. An algebra file carries the three
// algebra sections ([generators], [alpha], [bracket]) plus any number of
// named attachment sections; an attachment file carries attachments only and
// borrows its host algebra from the caller. Attachment order is recorded so
// reports and serialization stay deterministic.
//
// Cochains are targeted at the adjoint of the file's algebra; commands that
// need another target re-route through the shifted differentials. Maps keep
// the class the file declared, or "" when the section made no class claim
// (plain operator data, e.g. a Nijenhuis candidate).
struct AlgebraFile {
  ConformalAlgebra algebra;

  std::vector<std::string> rep_order, cochain_order, map_order;
  std::map<std::string, Representation> reps;
  std::map<std::string, Cochain> cochains;
  std::map<std::string, DerivationCandidate> maps;
};

// Parse a complete algebra file. Sections may appear in any order; all three
// algebra sections are required and [generators] may not be empty. Every
// diagnostic is a parse error naming the offending line.
AlgebraFile parse_algebra_file(const std::string& text);

// Parse a file holding only attachment sections against an already-loaded
// algebra (the form the auxiliary command-line inputs take). Algebra sections
// in such a file are rejected.
AlgebraFile parse_attachment_file(const std::string& text, const ConformalAlgebra& host);

// Read a whole file; unreadable paths are usage errors (they arrive from the
// command line).
std::string read_file(const std::string& path);

AlgebraFile load_algebra_file(const std::string& path);
AlgebraFile load_attachment_file(const std::string& path, const ConformalAlgebra& host);

// The d-matrix of a file-loaded operator whose entries never use the action
// slot l; NotDLinear otherwise. The module-endomorphism consumers (the
// Nijenhuis machinery) take this form.
ModuleMap as_module_map(const ConformalMap& f);

// Render back into the file format. Companion maps are emitted as auxiliary
// sections named <name>_arg / <name>_out (suffix repeated on collision) and
// referenced from their owner, so re-parsing reproduces the same candidate
// values even when the original file spelled the references differently.
std::string serialize_algebra_file(const AlgebraFile& f);

} // namespace homconf
