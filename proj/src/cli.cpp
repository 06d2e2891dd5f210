#include "cks/cli.hpp"

#include "cks/browsing.hpp"
#include "cks/error.hpp"
#include "cks/hyperize.hpp"
#include "cks/interchange.hpp"
#include "cks/io.hpp"
#include "cks/scaling.hpp"
#include "cks/service.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <ostream>

namespace cks {

namespace {

bool is_clif(const std::filesystem::path& p) { return p.extension() == ".clif"; }

ConceptLattice load_lattice(const std::filesystem::path& p) {
  const auto text = read_file(p);
  if (is_clif(p)) return clif_lattice(parse_clif(text));
  return ConceptLattice(fcif_context(parse_fcif(text)));
}

Mode mode_of(const std::string& text) { return text == "int" ? Mode::Intensional : Mode::Extensional; }

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

ConceptIndex resolve_state(const ConceptLattice& l, const std::string& state) {
  std::size_t number = 0;
  const auto [end, ec] = std::from_chars(state.data(), state.data() + state.size(), number);
  if (ec == std::errc{} && end == state.data() + state.size()) {
    if (number == 0 || number > l.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "no concept " + state + " (lattice has " + std::to_string(l.size()) + ")");
    }
    return number - 1;
  }
  for (const auto& label : concept_labels(l, LabelKinds::All)) {
    if (std::find(label.names.begin(), label.names.end(), state) != label.names.end()) return label.concept_index;
  }
  throw Error(ErrorKind::NotInContext, "no concept is labelled '" + state + "'");
}

std::string diagnostic(const std::string& file, const Error& e) {
  return file + (e.where().line ? ":" : ": ") + e.what() + " (" + std::string(to_string(e.kind())) + ")";
}

void validate_file(const std::filesystem::path& p) {
  const auto text = read_file(p);
  const auto ext = p.extension().string();
  if (ext == ".fcif") {
    fcif_context(parse_fcif(text));
  } else if (ext == ".clif") {
    clif_lattice(parse_clif(text));
  } else if (ext == ".rec") {
    parse_records(text);
  } else if (ext == ".cfg") {
    parse_scale_config(text);
  } else if (ext == ".links") {
    ingest_link_graph(parse_link_graph(text), IncidenceOrientation::CrossReferential);
  } else {
    throw Error(ErrorKind::SyntaxError, "unknown file type '" + ext + "'");
  }
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conceptual knowledge system tools", "cks"};
  app.require_subcommand(1);

  // convert
  std::string convert_in, convert_out;
  bool with_layout = false;
  auto* convert = app.add_subcommand("convert", "Convert FCIF to CLIF or CLIF to FCIF");
  convert->add_option("input", convert_in, "Input .fcif or .clif file")->required();
  convert->add_option("-o,--output", convert_out, "Output file (default: standard output)");
  convert->add_flag("--layout", with_layout, "Add a LAYOUT section to CLIF output");

  // lattice
  std::string lattice_in;
  bool list_concepts = false;
  auto* lattice = app.add_subcommand("lattice", "Build a lattice and print its statistics");
  lattice->add_option("input", lattice_in, "Input .fcif or .clif file")->required();
  lattice->add_flag("--concepts", list_concepts, "List every concept");

  // rank
  std::string rank_in, rank_state, rank_mode = "ext", rank_scope = "global";
  auto* rank = app.add_subcommand("rank", "Similarity or difference ranking at a conceptual state");
  rank->add_option("input", rank_in, "Input .fcif or .clif file")->required();
  rank->add_option("--state", rank_state, "Concept label name or number")->required();
  rank->add_option("--mode", rank_mode, "ext or int")->check(CLI::IsMember({"ext", "int"}));
  rank->add_option("--scope", rank_scope, "global or local")->check(CLI::IsMember({"global", "local"}));

  // query
  std::string query_in, query_mode = "int";
  std::vector<std::string> query_elements;
  double query_threshold = 0.0;
  auto* query = app.add_subcommand("query", "Goal query over attributes (int) or objects (ext)");
  query->add_option("input", query_in, "Input .fcif or .clif file")->required();
  query->add_option("elements", query_elements, "Attribute tokens or object names");
  query->add_option("--mode", query_mode, "int or ext")->check(CLI::IsMember({"ext", "int"}));
  query->add_option("--threshold", query_threshold, "Keep labels whose linkage from the goal reaches this value");

  // hyperize
  std::string hy_records, hy_scales, hy_links, hy_out, hy_orientation = "cross";
  double hy_threshold = 1.0;
  bool hy_objects = false;
  auto* hyper = app.add_subcommand("hyperize", "Records to lattice, linkage, crisp links and pages");
  hyper->add_option("--records", hy_records, "Metadata record file")->required();
  hyper->add_option("--scales", hy_scales, "Scale configuration file")->required();
  hyper->add_option("--links", hy_links, "Link graph file");
  hyper->add_option("--orientation", hy_orientation, "cross or hierarchical")
      ->check(CLI::IsMember({"cross", "hierarchical"}));
  hyper->add_option("--threshold", hy_threshold, "Crisp link threshold in (0,1]");
  hyper->add_option("--out", hy_out, "Write pages and links.txt to this directory");
  hyper->add_flag("--objects", hy_objects, "Print object-to-object links instead of concept links");

  // scale
  std::string sc_records, sc_scales, sc_out, sc_type;
  auto* scale = app.add_subcommand("scale", "Scale metadata records into an FCIF context");
  scale->add_option("--records", sc_records, "Metadata record file")->required();
  scale->add_option("--scales", sc_scales, "Scale configuration file")->required();
  scale->add_option("-o,--output", sc_out, "Output file (default: standard output)");
  scale->add_option("--type", sc_type, "TYPE name (default: records file stem)");

  // validate
  std::vector<std::string> to_validate;
  auto* validate = app.add_subcommand("validate", "Parse-check .fcif .clif .rec .cfg .links files");
  validate->add_option("files", to_validate, "Files to check")->required();

  // serve
  std::string workspace, bind_to = "127.0.0.1:8080";
  int idle_minutes = 30;
  auto* serve = app.add_subcommand("serve", "Run the HTTP browsing service over a workspace");
  serve->add_option("--workspace", workspace, "Workspace directory")->required();
  serve->add_option("--bind", bind_to, "host:port");
  serve->add_option("--idle", idle_minutes, "Session idle expiry in minutes")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help());
    return ExitOk;
  } catch (const CLI::ParseError& e) {
    const auto chosen = app.get_subcommands();
    err << "cks: " << e.what() << "\n" << (chosen.empty() ? app.help() : chosen.front()->help());
    return ExitUsage;
  }

  try {
    if (*convert) {
      const auto text = read_file(convert_in);
      std::string result;
      if (is_clif(convert_in)) {
        result = emit_fcif(clif_to_fcif(parse_clif(text)));
      } else {
        const auto doc = parse_fcif(text);
        result = emit_clif(clif_document(ConceptLattice(fcif_context(doc)), doc.type_name, with_layout));
      }
      write_output(convert_out, result, out);
    } else if (*lattice) {
      const auto l = load_lattice(lattice_in);
      const auto& ctx = l.context();
      out << "objects " << ctx.object_count() << "\nattributes " << ctx.attribute_count() << "\nviews "
          << ctx.views().size() << "\nconcepts " << l.size() << "\ncovers " << l.cover_count() << "\n";
      if (list_concepts) {
        const auto labels = concept_labels(l, LabelKinds::All);
        for (ConceptIndex k = 0; k < l.size(); ++k) {
          out << k + 1 << " { ";
          for (const auto& g : ctx.object_names(l.concept_at(k).extent)) out << quote_name(g) << ' ';
          out << "} { ";
          for (const auto& m : ctx.attribute_tokens(l.concept_at(k).intent)) out << quote_token(m) << ' ';
          out << "} " << labels[k].str() << "\n";
        }
      }
    } else if (*rank) {
      auto l = std::make_shared<const ConceptLattice>(load_lattice(rank_in));
      auto session = BrowseSession::start(l, mode_of(rank_mode));
      session.transition(resolve_state(*l, rank_state));
      if (rank_scope == "local") {
        session.enter_scope(Scope::Local);
        out << session.rank_difference().render();
      } else {
        out << session.rank_similarity().render();
      }
    } else if (*query) {
      const auto l = load_lattice(query_in);
      QueryResult result;
      if (query_mode == "int") {
        std::vector<AttributeToken> tokens;
        for (const auto& e : query_elements) tokens.push_back(AttributeToken::parse(e));
        result = intensional_query(l, tokens);
      } else {
        result = extensional_query(l, query_elements);
      }
      result.ranking = threshold_filter(result.ranking, query_threshold);
      out << "nearest " << result.nearest + 1 << "\ncoincides "
          << (result.coincides ? std::to_string(*result.coincides + 1) : std::string("-")) << "\ntwins";
      for (const auto& t : result.twins) out << ' ' << t;
      out << "\n" << result.ranking.render();
    } else if (*hyper) {
      HyperizationConfig config;
      config.scales = load_scale_config(hy_scales);
      config.threshold = hy_threshold;
      config.orientation =
          hy_orientation == "cross" ? IncidenceOrientation::CrossReferential : IncidenceOrientation::Hierarchical;
      if (!hy_links.empty()) config.links = load_link_graph(hy_links);
      const auto records = load_records(hy_records);
      const auto h = hyperize(records, config);
      for (const auto& w : h.warnings) err << "warning: " << w << "\n";
      if (!hy_out.empty()) {
        const auto files = emit_web(h.links, h.lattice, hy_out);
        out << "wrote " << files.size() << " files to " << hy_out << "\n";
      } else if (hy_objects) {
        for (const auto& link : project_to_objects(h.lattice, h.links)) {
          char weight[32];
          std::snprintf(weight, sizeof weight, "%.6f", link.weight);
          out << quote_name(link.source) << ' ' << quote_name(link.target) << ' ' << weight << "\n";
        }
      } else {
        out << format_crisp_links(h.links);
      }
    } else if (*scale) {
      const auto config = load_scale_config(sc_scales);
      const auto records = load_records(sc_records);
      const auto ctx = interpret(records, config.scales).with_views(config.views);
      const auto type = sc_type.empty() ? std::filesystem::path(sc_records).stem().string() : sc_type;
      write_output(sc_out, emit_fcif(fcif_document(ctx, type)), out);
    } else if (*validate) {
      int status = ExitOk;
      for (const auto& file : to_validate) {
        try {
          validate_file(file);
          out << file << ": ok\n";
        } catch (const Error& e) {
          err << diagnostic(file, e) << "\n";
          status = ExitData;
        }
      }
      return status;
    } else if (*serve) {
      const auto colon = bind_to.rfind(':');
      int port = -1;
      if (colon != std::string::npos) {
        const auto digits = bind_to.substr(colon + 1);
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
        if (ec != std::errc{} || end != digits.data() + digits.size()) port = -1;
      }
      if (port < 0 || port > 65535) {
        err << "cks: --bind expects host:port, got '" << bind_to << "'\n" << serve->help();
        return ExitUsage;
      }
      Service service(Workspace::load(workspace), std::chrono::minutes(idle_minutes));
      HttpServer server(service);
      const auto host = bind_to.substr(0, colon);
      const int bound = server.bind(host, port);
      out << "listening on " << host << ":" << bound << std::endl;
      server.listen();
    }
  } catch (const Error& e) {
    err << "cks: error: " << e.what() << " (" << to_string(e.kind()) << ")\n";
    return ExitData;
  }
  return ExitOk;
}

}  // namespace cks
