#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "risid/errors.hpp"
#include "risid/rng.hpp"
#include "risid/scenario.hpp"
#include "support.hpp"

using namespace risid;

TEST_CASE("three-RIS scenario document") {
  const Scenario s = load_scenario(test::three_ris_document);
  REQUIRE(s.ris_list.size() == 3);
  CHECK(s.serving_ris_id == 2);
  CHECK(s.ris(3).position == Position{20.0, 17.0});
  CHECK(s.ris(1).signature == 1);
  CHECK(s.channel.path_loss_exponent == 2.0);
  CHECK(std::isinf(s.channel.snr_db));
  CHECK(s.channel.num_delay_taps == 1);
  CHECK(s == test::three_ris_scenario());
}

TEST_CASE("minimal single-element scenario is valid") {
  const Scenario s = load_scenario(R"(
[bs]
x = 0
y = 0
[ue]
x = 1
y = 1
serving_ris_id = 1
[[ris]]
id = 1
x = 1
y = 0
num_elements = 1
)");
  CHECK(s.ris_list.size() == 1);
  CHECK(s.ris(1).num_elements == 1);
}

namespace {

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::string error_of(const std::string& doc) {
  try {
    load_scenario(doc);
  } catch (const ValidationError& e) {
    return e.what();
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("validation errors name the offending field") {
  const std::string doc = test::three_ris_document;
  CHECK(error_of(replace(doc, "serving_ris_id = 2", "serving_ris_id = 9")).find("serving_ris_id") !=
        std::string::npos);
  CHECK(error_of(replace(doc, "num_elements = 64", "num_elements = 0")).find("num_elements") != std::string::npos);
  CHECK(error_of(replace(doc, "id = 3", "id = 1")).find("duplicate") != std::string::npos);
  CHECK(error_of(doc + "\n[channel]\nbogus = 1\n").find("[channel].bogus") != std::string::npos);
  CHECK(error_of(doc + "\n[nonsense]\n").find("[nonsense]") != std::string::npos);
  CHECK(error_of(doc + "\n[channel]\nwaveform = \"ofdm\"\n").find("waveform") != std::string::npos);
  CHECK(error_of(doc + "\n[channel]\nnum_subcarriers = 48\n").find("num_subcarriers") != std::string::npos);
  CHECK(error_of(doc + "\n[scheme.watermark]\nm = 8\n").find("[scheme.watermark].m") != std::string::npos);
  CHECK(error_of(doc + "\n[scheme.spectral]\ngroup_size = 7\n").find("group_size") != std::string::npos);
  CHECK(error_of(replace(doc, "[bs]\nx = 0.0\ny = 0.0\n", "")).find("[bs]") != std::string::npos);
}

namespace {

Scenario random_scenario(Stream& s) {
  Scenario sc;
  const auto coord = [&] { return std::round((s.uniform() - 0.5) * 2000.0) / 16.0; };
  sc.bs_position = {coord(), coord()};
  do sc.ue_position = {coord(), coord()};
  while (sc.ue_position == sc.bs_position);
  const int n = 1 + static_cast<int>(s.next_u32() % 5);
  for (int i = 0; i < n; ++i) {
    RisDescriptor d;
    d.ris_id = 1 + i * 3;
    do d.position = {coord(), coord()};
    while (d.position == sc.bs_position || d.position == sc.ue_position);
    d.num_elements = 1 + static_cast<int>(s.next_u32() % 300);
    d.signature = i;
    d.blocked = s.uniform() < 0.2;
    sc.ris_list.push_back(d);
  }
  sc.serving_ris_id = sc.ris_list[s.next_u32() % n].ris_id;
  auto& c = sc.channel;
  c.path_loss_exponent = 1.0 + 3.0 * s.uniform();
  c.snr_db = s.uniform() < 0.3 ? kNoiseless : (s.uniform() - 0.3) * 50.0;
  c.snr_reference = s.uniform() < 0.5 ? SnrReference::Serving : SnrReference::Transmit;
  c.num_delay_taps = 1 + static_cast<int>(s.next_u32() % 6);
  c.tap_decay = s.uniform() < 0.2 ? kNoiseless : 0.1 + 4.0 * s.uniform();
  c.tap_spacing = 1 + static_cast<int>(s.next_u32() % 3);
  c.waveform = s.uniform() < 0.5 ? Waveform::SingleCarrier : Waveform::MultiCarrier;
  c.num_subcarriers = 1 << (5 + s.next_u32() % 4);
  c.cp_len = static_cast<int>(s.next_u32() % 17);
  c.direct_path = s.uniform() < 0.3;
  if (s.uniform() < 0.5) sc.schemes.ampmod = AmpModParams{3 + static_cast<int>(s.next_u32() % 4), 16, s.uniform(), 2};
  if (s.uniform() < 0.5) {
    SpectralParams p;
    p.group_size = 4;
    p.M = 1 + static_cast<int>(s.next_u32() % 20);
    p.mode = s.uniform() < 0.5 ? SpectralMode::Dominant : SpectralMode::EngagedSet;
    p.threshold_factor = 1.0 + s.uniform();
    if (s.uniform() < 0.5) p.num_delay_taps = 4;
    if (s.uniform() < 0.5) p.S = c.num_subcarriers;
    p.null_out_of_group = s.uniform() < 0.5;
    sc.schemes.spectral = p;
  }
  if (s.uniform() < 0.5) {
    const int degrees[] = {3, 5, 6, 7};
    sc.schemes.watermark =
        WatermarkParams{degrees[s.next_u32() % 4], 1 + static_cast<int>(s.next_u32() % 4),
                        s.uniform() < 0.5 ? PowerSplit::Equal : PowerSplit::Full, s.uniform() < 0.5};
  }
  return sc;
}

}  // namespace

TEST_CASE("serialize then load is the identity") {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    Stream s(21, 0, trial);
    const Scenario sc = random_scenario(s);
    REQUIRE_NOTHROW(sc.validate());
    const std::string text = serialize_scenario(sc);
    const Scenario back = load_scenario(text);
    REQUIRE_MESSAGE(back == sc, text);
    REQUIRE(serialize_scenario(back) == text);
  }
}

TEST_CASE("mutated documents either fail cleanly or satisfy every invariant") {
  const std::string base = serialize_scenario(load_scenario(std::string(test::three_ris_document) +
                                                            "\n[channel]\nsnr_db = 3.0\n"
                                                            "[scheme.watermark]\nm = 5\n"
                                                            "[scheme.ampmod]\nL = 3\n"));
  std::vector<std::string> lines;
  {
    std::istringstream in(base);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  const std::vector<std::string> tokens = {"0",  "-1",   "1e9", "nan", "inf", "-inf", "\"x\"", "true",
                                           "[]", "2.5",  "7",   "",    "64",  "=",    "[",     "1 2"};
  int accepted = 0, rejected = 0;
  for (std::uint64_t trial = 0; trial < 3000; ++trial) {
    Stream s(99, 0, trial);
    std::vector<std::string> mutated = lines;
    const std::size_t i = s.next_u32() % mutated.size();
    switch (s.next_u32() % 4) {
      case 0:
        mutated.erase(mutated.begin() + static_cast<long>(i));
        break;
      case 1: {
        const auto eq = mutated[i].find(" = ");
        if (eq != std::string::npos)
          mutated[i] = mutated[i].substr(0, eq + 3) + tokens[s.next_u32() % tokens.size()];
        break;
      }
      case 2:
        mutated.insert(mutated.begin() + static_cast<long>(i), mutated[s.next_u32() % mutated.size()]);
        break;
      default:
        std::swap(mutated[i], mutated[s.next_u32() % mutated.size()]);
    }
    std::string doc;
    for (const auto& l : mutated) doc += l + "\n";
    try {
      const Scenario sc = load_scenario(doc);
      ++accepted;
      REQUIRE_NOTHROW(sc.validate());
      REQUIRE(!sc.ris_list.empty());
      std::set<int> ids;
      for (const auto& r : sc.ris_list) {
        REQUIRE(ids.insert(r.ris_id).second);
        REQUIRE(r.num_elements >= 1);
      }
      REQUIRE(ids.contains(sc.serving_ris_id));
      REQUIRE(sc.channel.path_loss_exponent > 0.0);
      REQUIRE(sc.channel.num_delay_taps >= 1);
      REQUIRE(load_scenario(serialize_scenario(sc)) == sc);
    } catch (const ValidationError&) {
      ++rejected;
    } catch (const ParseError&) {
      ++rejected;
    }
  }
  CHECK(accepted > 0);
  CHECK(rejected > 0);
}

TEST_CASE("scheme names") {
  for (SchemeKind k : {SchemeKind::AmpMod, SchemeKind::Spectral, SchemeKind::Watermark})
    CHECK(parse_scheme(scheme_name(k)) == k);
  CHECK_THROWS_AS(parse_scheme("cdma"), ValidationError);
}

TEST_CASE("RIS colocated with the BS is rejected") {
  std::string doc = test::three_ris_document;
  doc.replace(doc.find("x = 15.0"), 8, "x = 0.0");
  CHECK_THROWS_WITH_AS(load_scenario(doc), doctest::Contains("colocated"), ValidationError);
}
