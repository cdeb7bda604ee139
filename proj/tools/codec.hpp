#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bt/bg.hpp"
#include "bt/rh.hpp"

namespace btcli {

using json = nlohmann::ordered_json;
using namespace bt;

// Input that does not match the command's schema; `where` is a JSON pointer.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string where, const std::string& msg) : std::runtime_error(msg), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

[[noreturn]] void schema_fail(const std::string& where, const std::string& msg);

const json& field(const json& obj, const std::string& key, const std::string& where);
int as_int(const json& j, const std::string& where);
std::vector<int> as_ints(const json& j, const std::string& where);

// [num, den, inum, iden]; plain integers and [num, den] are accepted on input.
json enc(const GQ& x);
GQ dec_gq(const json& j, const std::string& where);

// {"val": v, "coeffs": [...], "prec": p | null}; a bare scalar is an exact constant.
json enc(const Series& s);
Series dec_series(const json& j, const std::string& where);

json enc(const CMat& m);
CMat dec_cmat(const json& j, const std::string& where);
json enc(const SMat& m);
SMat dec_smat(const json& j, const std::string& where);
json enc_flag(const std::vector<CMat>& flag);
std::vector<CMat> dec_flag(const json& j, const std::string& where);

// {"dim": n, "poles": [...], "residues": [...]}
json enc(const FuchsianSystem& sys);
FuchsianSystem dec_system(const json& j, const std::string& where);

json enc(const Move& m);
Move dec_move(const json& j, int n, const std::string& where);
json enc_log(const std::vector<Move>& log);
std::vector<Move> dec_log(const json& j, int n, const std::string& where);

json enc(const WeakSolutionState& st);

// "I" for an exact identity, the matrix otherwise.
json enc_or_identity(const SMat& m);

}  // namespace btcli
