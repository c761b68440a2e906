#include "dcfsim/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dcfsim {

using nlohmann::json;

namespace {

SimTime seconds_value(const json& v) { return from_seconds(v.get<double>()); }

template <typename Apply>
void apply_section(const json& obj, const char* name, Apply&& apply) {
  if (!obj.is_object()) throw ConfigError(std::string("section '") + name + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!apply(key, value))
      throw ConfigError(std::string("unknown key '") + key + "' in section '" + name + "'");
  }
}

bool apply_mac(MacParams& m, const std::string& key, const json& v) {
  if (key == "slot_time") m.slot_time = seconds_value(v);
  else if (key == "sifs") m.sifs = seconds_value(v);
  else if (key == "difs") m.difs = seconds_value(v);
  else if (key == "cw_min") m.cw_min = v.get<std::uint32_t>();
  else if (key == "cw_max") m.cw_max = v.get<std::uint32_t>();
  else if (key == "short_retry_limit") m.short_retry_limit = v.get<std::uint32_t>();
  else if (key == "long_retry_limit") m.long_retry_limit = v.get<std::uint32_t>();
  else if (key == "rts_threshold_bytes") m.rts_threshold_bytes = v.get<std::uint32_t>();
  else if (key == "plcp_overhead") m.plcp_overhead = seconds_value(v);
  else if (key == "queue_capacity") m.queue_capacity = v.get<std::uint32_t>();
  else return false;
  return true;
}

bool apply_radio(RadioParams& r, const std::string& key, const json& v) {
  if (key == "bandwidth_bps") r.bandwidth_bps = v.get<double>();
  else if (key == "frequency_hz") r.frequency_hz = v.get<double>();
  else if (key == "capture_threshold_db") r.capture_threshold_db = v.get<double>();
  else if (key == "carrier_sense_threshold_w") r.carrier_sense_threshold_w = v.get<double>();
  else if (key == "receive_threshold_w") r.receive_threshold_w = v.get<double>();
  else if (key == "tx_power_w") r.tx_power_w = v.get<double>();
  else if (key == "antenna_gain_tx") r.antenna_gain_tx = v.get<double>();
  else if (key == "antenna_gain_rx") r.antenna_gain_rx = v.get<double>();
  else if (key == "antenna_height_m") r.antenna_height_m = v.get<double>();
  else return false;
  return true;
}

bool apply_tcp(TcpParams& t, const std::string& key, const json& v) {
  if (key == "max_window") t.max_window = v.get<std::uint32_t>();
  else if (key == "initial_ssthresh") t.initial_ssthresh = v.get<double>();
  else if (key == "data_bytes") t.data_bytes = v.get<std::uint32_t>();
  else if (key == "ack_bytes") t.ack_bytes = v.get<std::uint32_t>();
  else if (key == "initial_rto") t.initial_rto_s = v.get<double>();
  else if (key == "min_rto") t.min_rto_s = v.get<double>();
  else if (key == "max_rto") t.max_rto_s = v.get<double>();
  else if (key == "dupack_threshold") t.dupack_threshold = v.get<std::uint32_t>();
  else return false;
  return true;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text, ScenarioConfig cfg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("scenario document must be a JSON object");

  bool payload_set = false;
  bool tcp_data_set = false;
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "n_intermediate") cfg.n_intermediate = v.get<std::uint32_t>();
      else if (key == "duration") cfg.duration = seconds_value(v);
      else if (key == "node_spacing") cfg.node_spacing = v.get<double>();
      else if (key == "n_flows") cfg.n_flows = v.get<std::uint32_t>();
      else if (key == "payload") {
        cfg.payload = v.get<std::uint32_t>();
        payload_set = true;
      } else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "edge_angle_deg") cfg.edge_angle_deg = v.get<double>();
      else if (key == "flow_stagger") cfg.flow_stagger = seconds_value(v);
      else if (key == "allow_any_n") cfg.allow_any_n = v.get<bool>();
      else if (key == "field") {
        apply_section(v, "field", [&](const std::string& k, const json& x) {
          if (k == "x") cfg.field_x = x.get<double>();
          else if (k == "y") cfg.field_y = x.get<double>();
          else return false;
          return true;
        });
      } else if (key == "mac") {
        apply_section(v, "mac", [&](const std::string& k, const json& x) { return apply_mac(cfg.mac, k, x); });
      } else if (key == "radio") {
        apply_section(v, "radio", [&](const std::string& k, const json& x) { return apply_radio(cfg.radio, k, x); });
      } else if (key == "tcp") {
        apply_section(v, "tcp", [&](const std::string& k, const json& x) {
          if (k == "data_bytes") tcp_data_set = true;
          return apply_tcp(cfg.tcp, k, x);
        });
      } else {
        throw ConfigError("unknown scenario key '" + key + "'");
      }
    }
  } catch (const json::type_error& e) {
    throw ConfigError(std::string("scenario value has the wrong type: ") + e.what());
  } catch (const json::out_of_range& e) {
    throw ConfigError(std::string("scenario value out of range: ") + e.what());
  }
  if (payload_set && !tcp_data_set) cfg.tcp.data_bytes = cfg.payload;
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), std::move(base));
}

std::string dump_scenario(const ScenarioConfig& cfg) {
  auto secs = [](SimTime t) { return to_seconds(t); };
  json doc = {
      {"n_intermediate", cfg.n_intermediate},
      {"duration", secs(cfg.duration)},
      {"node_spacing", cfg.node_spacing},
      {"field", {{"x", cfg.field_x}, {"y", cfg.field_y}}},
      {"n_flows", cfg.n_flows},
      {"payload", cfg.payload},
      {"seed", cfg.seed},
      {"edge_angle_deg", cfg.edge_angle_deg},
      {"flow_stagger", secs(cfg.flow_stagger)},
      {"allow_any_n", cfg.allow_any_n},
      {"mac",
       {{"slot_time", secs(cfg.mac.slot_time)},
        {"sifs", secs(cfg.mac.sifs)},
        {"difs", secs(cfg.mac.difs)},
        {"cw_min", cfg.mac.cw_min},
        {"cw_max", cfg.mac.cw_max},
        {"short_retry_limit", cfg.mac.short_retry_limit},
        {"long_retry_limit", cfg.mac.long_retry_limit},
        {"rts_threshold_bytes", cfg.mac.rts_threshold_bytes},
        {"plcp_overhead", secs(cfg.mac.plcp_overhead)},
        {"queue_capacity", cfg.mac.queue_capacity}}},
      {"radio",
       {{"bandwidth_bps", cfg.radio.bandwidth_bps},
        {"frequency_hz", cfg.radio.frequency_hz},
        {"capture_threshold_db", cfg.radio.capture_threshold_db},
        {"carrier_sense_threshold_w", cfg.radio.carrier_sense_threshold_w},
        {"receive_threshold_w", cfg.radio.receive_threshold_w},
        {"tx_power_w", cfg.radio.tx_power_w},
        {"antenna_gain_tx", cfg.radio.antenna_gain_tx},
        {"antenna_gain_rx", cfg.radio.antenna_gain_rx},
        {"antenna_height_m", cfg.radio.antenna_height_m}}},
      {"tcp",
       {{"max_window", cfg.tcp.max_window},
        {"initial_ssthresh", cfg.tcp.initial_ssthresh},
        {"data_bytes", cfg.tcp.data_bytes},
        {"ack_bytes", cfg.tcp.ack_bytes},
        {"initial_rto", cfg.tcp.initial_rto_s},
        {"min_rto", cfg.tcp.min_rto_s},
        {"max_rto", cfg.tcp.max_rto_s},
        {"dupack_threshold", cfg.tcp.dupack_threshold}}},
  };
  return doc.dump(2);
}

}  // namespace dcfsim
