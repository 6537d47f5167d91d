#include "risid/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "risid/config.hpp"
#include "risid/errors.hpp"
#include "risid/sequences.hpp"

namespace risid {

namespace {

using config::TableReader;

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ValidationError(field + ": " + what);
}

Position read_position(TableReader& r) {
  Position p{r.get_double("x"), r.get_double("y")};
  check(std::isfinite(p.x), r.field("x"), "must be finite");
  check(std::isfinite(p.y), r.field("y"), "must be finite");
  return p;
}

int to_int(std::int64_t v, const std::string& field) {
  check(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(), field,
        "out of range");
  return static_cast<int>(v);
}

template <typename Enum>
Enum read_enum(TableReader& r, std::string_view key, Enum fallback,
               std::initializer_list<std::pair<std::string_view, Enum>> names) {
  if (!r.has(key)) return fallback;
  const std::string v = r.get_string(key);
  for (const auto& [name, e] : names)
    if (name == v) return e;
  std::string allowed;
  for (const auto& [name, e] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  throw ValidationError(r.field(key) + ": unknown value '" + v + "' (expected one of " + allowed +
                        ")");
}

template <typename Enum>
std::string_view enum_name(Enum e, std::initializer_list<std::pair<std::string_view, Enum>> names) {
  for (const auto& [name, v] : names)
    if (v == e) return name;
  throw InvariantError("unnamed enum value");
}

const std::initializer_list<std::pair<std::string_view, SnrReference>> kSnrRefs = {
    {"serving", SnrReference::Serving}, {"transmit", SnrReference::Transmit}};
const std::initializer_list<std::pair<std::string_view, Waveform>> kWaveforms = {
    {"single_carrier", Waveform::SingleCarrier}, {"multi_carrier", Waveform::MultiCarrier}};
const std::initializer_list<std::pair<std::string_view, SpectralMode>> kModes = {
    {"dominant", SpectralMode::Dominant}, {"engaged_set", SpectralMode::EngagedSet}};
const std::initializer_list<std::pair<std::string_view, PowerSplit>> kSplits = {
    {"equal", PowerSplit::Equal}, {"full", PowerSplit::Full}};

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

const RisDescriptor& Scenario::ris(int ris_id) const { return ris_list[index_of(ris_id)]; }

std::size_t Scenario::index_of(int ris_id) const {
  for (std::size_t i = 0; i < ris_list.size(); ++i)
    if (ris_list[i].ris_id == ris_id) return i;
  throw ValidationError("unknown ris_id " + std::to_string(ris_id));
}

void Scenario::validate() const {
  check(std::isfinite(bs_position.x) && std::isfinite(bs_position.y), "[bs]", "position must be finite");
  check(std::isfinite(ue_position.x) && std::isfinite(ue_position.y), "[ue]", "position must be finite");
  check(!ris_list.empty(), "[[ris]]", "at least one RIS is required");
  std::set<int> ids;
  for (std::size_t i = 0; i < ris_list.size(); ++i) {
    const auto& r = ris_list[i];
    const std::string f = "[[ris]] #" + std::to_string(i + 1);
    check(r.ris_id >= 1, f + ".id", "must be a positive integer");
    check(ids.insert(r.ris_id).second, f + ".id", "duplicate ris_id " + std::to_string(r.ris_id));
    check(r.num_elements >= 1, f + ".num_elements", "must be >= 1");
    check(r.signature >= 0, f + ".signature", "must be >= 0");
    check(std::isfinite(r.position.x) && std::isfinite(r.position.y), f, "position must be finite");
    check(distance(bs_position, r.position) > 0.0, f, "RIS colocated with the BS");
    check(distance(ue_position, r.position) > 0.0, f, "RIS colocated with the UE");
  }
  check(ids.contains(serving_ris_id), "[ue].serving_ris_id",
        "no RIS with id " + std::to_string(serving_ris_id));

  const auto& c = channel;
  check(c.path_loss_exponent > 0.0 && std::isfinite(c.path_loss_exponent),
        "[channel].path_loss_exponent", "must be positive");
  check(!std::isnan(c.snr_db) && c.snr_db != -kNoiseless, "[channel].snr_db",
        "must be a real number or inf");
  check(c.num_delay_taps >= 1, "[channel].num_delay_taps", "must be >= 1");
  check(c.tap_decay > 0.0, "[channel].tap_decay", "must be positive");
  check(c.tap_spacing >= 1, "[channel].tap_spacing", "must be >= 1");
  check(is_power_of_two(c.num_subcarriers), "[channel].num_subcarriers", "must be a power of two");
  check(c.cp_len >= 0 && c.cp_len < c.num_subcarriers, "[channel].cp_len",
        "must satisfy 0 <= cp_len < num_subcarriers");
  if (c.direct_path) check(distance(bs_position, ue_position) > 0.0, "[channel].direct_path",
                           "BS colocated with the UE");

  if (const auto& a = schemes.ampmod) {
    check(a->L >= 1, "[scheme.ampmod].L", "must be >= 1");
    check(a->slot_length >= 1, "[scheme.ampmod].slot_length", "must be >= 1");
    check(a->rho >= 0.0 && a->rho <= 1.0, "[scheme.ampmod].rho", "must lie in [0, 1]");
    check(a->d_min >= 1, "[scheme.ampmod].d_min", "must be >= 1");
  }
  if (const auto& s = schemes.spectral) {
    const int S = spectral_subcarriers(*this);
    check(is_power_of_two(S), "[scheme.spectral].S", "must be a power of two");
    check(c.cp_len < S, "[scheme.spectral].S", "must exceed [channel].cp_len");
    check(s->group_size >= 1 && S % s->group_size == 0, "[scheme.spectral].group_size",
          "must divide S");
    check(s->M >= 1, "[scheme.spectral].M", "must be >= 1");
    check(s->threshold_factor > 0.0, "[scheme.spectral].threshold_factor", "must be positive");
    if (s->num_delay_taps)
      check(*s->num_delay_taps >= 1, "[scheme.spectral].num_delay_taps", "must be >= 1");
  }
  if (const auto& w = schemes.watermark) {
    check(gold_degree_supported(w->m), "[scheme.watermark].m",
          "unsupported Gold degree " + std::to_string(w->m));
    check(w->num_payload_symbols >= 1, "[scheme.watermark].num_payload_symbols", "must be >= 1");
  }
}

int spectral_taps(const Scenario& s) {
  if (s.schemes.spectral && s.schemes.spectral->num_delay_taps) return *s.schemes.spectral->num_delay_taps;
  return s.channel.num_delay_taps;
}

int spectral_subcarriers(const Scenario& s) {
  if (s.schemes.spectral && s.schemes.spectral->S) return *s.schemes.spectral->S;
  return s.channel.num_subcarriers;
}

std::string_view scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::AmpMod: return "ampmod";
    case SchemeKind::Spectral: return "spectral";
    case SchemeKind::Watermark: return "watermark";
  }
  throw InvariantError("unknown scheme kind");
}

SchemeKind parse_scheme(std::string_view name) {
  if (name == "ampmod") return SchemeKind::AmpMod;
  if (name == "spectral") return SchemeKind::Spectral;
  if (name == "watermark") return SchemeKind::Watermark;
  throw ValidationError("unknown scheme '" + std::string(name) +
                        "' (expected ampmod, spectral or watermark)");
}

Scenario load_scenario(std::string_view text) {
  const config::Document doc = config::parse(text);
  Scenario s;

  {
    TableReader root(doc.root());
    root.finish();
  }
  const auto require_table = [&](std::string_view name) -> const config::Table& {
    const config::Table* t = doc.table(name);
    if (!t) throw ValidationError("[" + std::string(name) + "]: required section missing");
    return *t;
  };

  {
    TableReader r(require_table("bs"));
    s.bs_position = read_position(r);
    r.finish();
  }
  {
    TableReader r(require_table("ue"));
    s.ue_position = read_position(r);
    s.serving_ris_id = to_int(r.get_int("serving_ris_id"), r.field("serving_ris_id"));
    r.finish();
  }
  for (const config::Table* t : doc.array("ris")) {
    TableReader r(*t);
    RisDescriptor d;
    d.ris_id = to_int(r.get_int("id"), r.field("id"));
    d.position = read_position(r);
    d.num_elements = to_int(r.get_int("num_elements"), r.field("num_elements"));
    d.signature = to_int(r.get_int("signature", d.ris_id), r.field("signature"));
    d.blocked = r.get_bool("blocked", false);
    r.finish();
    s.ris_list.push_back(d);
  }
  if (const config::Table* t = doc.table("channel")) {
    TableReader r(*t);
    auto& c = s.channel;
    c.path_loss_exponent = r.get_double("path_loss_exponent", c.path_loss_exponent);
    c.snr_db = r.get_double("snr_db", c.snr_db);
    c.snr_reference = read_enum(r, "snr_reference", c.snr_reference, kSnrRefs);
    c.num_delay_taps = to_int(r.get_int("num_delay_taps", c.num_delay_taps), r.field("num_delay_taps"));
    c.tap_decay = r.get_double("tap_decay", c.tap_decay);
    c.tap_spacing = to_int(r.get_int("tap_spacing", c.tap_spacing), r.field("tap_spacing"));
    c.waveform = read_enum(r, "waveform", c.waveform, kWaveforms);
    c.num_subcarriers = to_int(r.get_int("num_subcarriers", c.num_subcarriers), r.field("num_subcarriers"));
    c.cp_len = to_int(r.get_int("cp_len", c.cp_len), r.field("cp_len"));
    c.direct_path = r.get_bool("direct_path", c.direct_path);
    r.finish();
  }
  for (const config::Table& t : doc.tables) {
    if (t.name.empty() || t.is_array_element) {
      if (t.is_array_element && t.name != "ris")
        throw ValidationError("[[" + t.name + "]]: unknown section");
      continue;
    }
    if (t.name == "bs" || t.name == "ue" || t.name == "channel") continue;
    TableReader r(t);
    if (t.name == "scheme.ampmod") {
      AmpModParams a;
      a.L = to_int(r.get_int("L", a.L), r.field("L"));
      a.slot_length = to_int(r.get_int("slot_length", a.slot_length), r.field("slot_length"));
      a.rho = r.get_double("rho", a.rho);
      a.d_min = to_int(r.get_int("d_min", a.d_min), r.field("d_min"));
      s.schemes.ampmod = a;
    } else if (t.name == "scheme.spectral") {
      SpectralParams p;
      if (r.has("S")) p.S = to_int(r.get_int("S"), r.field("S"));
      p.group_size = to_int(r.get_int("group_size", p.group_size), r.field("group_size"));
      p.M = to_int(r.get_int("M", p.M), r.field("M"));
      p.mode = read_enum(r, "mode", p.mode, kModes);
      p.threshold_factor = r.get_double("threshold_factor", p.threshold_factor);
      if (r.has("num_delay_taps"))
        p.num_delay_taps = to_int(r.get_int("num_delay_taps"), r.field("num_delay_taps"));
      p.null_out_of_group = r.get_bool("null_out_of_group", p.null_out_of_group);
      s.schemes.spectral = p;
    } else if (t.name == "scheme.watermark") {
      WatermarkParams w;
      w.m = to_int(r.get_int("m", w.m), r.field("m"));
      w.num_payload_symbols =
          to_int(r.get_int("num_payload_symbols", w.num_payload_symbols), r.field("num_payload_symbols"));
      w.power_split = read_enum(r, "power_split", w.power_split, kSplits);
      w.payload_known = r.get_bool("payload_known", w.payload_known);
      s.schemes.watermark = w;
    } else {
      throw ValidationError("[" + t.name + "]: unknown section");
    }
    r.finish();
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

std::string serialize_scenario(const Scenario& s) {
  using config::format_double;
  using config::quote;
  std::ostringstream o;
  o << "[bs]\nx = " << format_double(s.bs_position.x) << "\ny = " << format_double(s.bs_position.y)
    << "\n\n[ue]\nx = " << format_double(s.ue_position.x) << "\ny = " << format_double(s.ue_position.y)
    << "\nserving_ris_id = " << s.serving_ris_id << "\n";
  for (const auto& r : s.ris_list) {
    o << "\n[[ris]]\nid = " << r.ris_id << "\nx = " << format_double(r.position.x)
      << "\ny = " << format_double(r.position.y) << "\nnum_elements = " << r.num_elements
      << "\nsignature = " << r.signature << "\nblocked = " << (r.blocked ? "true" : "false") << "\n";
  }
  const auto& c = s.channel;
  o << "\n[channel]\npath_loss_exponent = " << format_double(c.path_loss_exponent)
    << "\nsnr_db = " << format_double(c.snr_db)
    << "\nsnr_reference = " << quote(enum_name(c.snr_reference, kSnrRefs))
    << "\nnum_delay_taps = " << c.num_delay_taps << "\ntap_decay = " << format_double(c.tap_decay)
    << "\ntap_spacing = " << c.tap_spacing << "\nwaveform = " << quote(enum_name(c.waveform, kWaveforms))
    << "\nnum_subcarriers = " << c.num_subcarriers << "\ncp_len = " << c.cp_len
    << "\ndirect_path = " << (c.direct_path ? "true" : "false") << "\n";
  if (const auto& a = s.schemes.ampmod) {
    o << "\n[scheme.ampmod]\nL = " << a->L << "\nslot_length = " << a->slot_length
      << "\nrho = " << format_double(a->rho) << "\nd_min = " << a->d_min << "\n";
  }
  if (const auto& p = s.schemes.spectral) {
    o << "\n[scheme.spectral]\n";
    if (p->S) o << "S = " << *p->S << "\n";
    o << "group_size = " << p->group_size << "\nM = " << p->M
      << "\nmode = " << quote(enum_name(p->mode, kModes))
      << "\nthreshold_factor = " << format_double(p->threshold_factor) << "\n";
    if (p->num_delay_taps) o << "num_delay_taps = " << *p->num_delay_taps << "\n";
    o << "null_out_of_group = " << (p->null_out_of_group ? "true" : "false") << "\n";
  }
  if (const auto& w = s.schemes.watermark) {
    o << "\n[scheme.watermark]\nm = " << w->m << "\nnum_payload_symbols = " << w->num_payload_symbols
      << "\npower_split = " << quote(enum_name(w->power_split, kSplits))
      << "\npayload_known = " << (w->payload_known ? "true" : "false") << "\n";
  }
  return o.str();
}

}  // namespace risid
