#include "tutorial.hpp"
#include "test_support.hpp"

#include "evograph/provenance.hpp"

namespace evograph::testing {

TutorialRun run_tutorial(const std::filesystem::path& root, AssistantGateway& gateway, EngineOptions options) {
    write_text(root / "README.md", kTutorialReadme);
    auto ws = Workspace::init(root, gateway, std::move(options));
    TutorialRun run;
    run.origin = ws.graph().origin();

    auto python = ws.send_prompt(kPythonPrompt, false);
    run.python_tip = ws.apply_code_block(python.assistant_message, "b1").id;

    ws.switch_to(run.origin);
    auto java = ws.send_prompt(kJavaPrompt, false);
    ws.apply_code_block(java.assistant_message, "b1");
    write_text(root / "README.md", read_text(root / "README.md") + kHandEdit);
    run.java_tip = ws.checkpoint_manual().id;

    run.compare = compare_checkpoints(ws.state(), ws.store(), ws.graph().active(), run.python_tip);
    run.merge = ws.merge_with(run.python_tip).checkpoint;
    run.readme = read_text(root / "README.md");
    run.provenance = compute_provenance(ws.graph(), ws.store());
    run.review = render_review(ws.graph(), run.provenance);
    run.session_text = read_text(ws.session_dir() / kSessionFileName);
    return run;
}

} // namespace evograph::testing
