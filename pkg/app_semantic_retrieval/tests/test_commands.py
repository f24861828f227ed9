import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command, load_command_class
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from app_semantic_retrieval.models import ExperimentRun


def run(name, *args):
    out = StringIO()
    call_command(name, *args, stdout=out, stderr=StringIO(), no_color=True)
    return out.getvalue().splitlines()


class CommandTestMixin:
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = Path(tmp.name)

    def make_graph(self):
        path = self.tmp / "graph.tsv"
        run(
            "build_graph",
            "--num-points", "40",
            "--clusters", "4",
            "--seed", "3",
            "--out", str(path),
        )
        lines = path.read_text(encoding="utf-8").splitlines()
        first_node = next(line for line in lines if not line.startswith("#")).split("\t")[0]
        return path, first_node


class GenerateCommandTests(CommandTestMixin, SimpleTestCase):
    def test_writes_dataset(self):
        path = self.tmp / "data" / "points.tsv"
        lines = run("generate", "--num-points", "30", "--clusters", "3", "--out", str(path))
        self.assertIn("30 points in 3 clusters", lines[0])
        text = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(text[0], "#nodes 30 #dim 2")
        self.assertEqual(len(text), 31)


class CompressCommandTests(SimpleTestCase):
    def test_prints_selection_and_objective(self):
        lines = run("compress", "--num-points", "50", "--k", "4", "--pool-size", "12")
        self.assertEqual(len(lines), 5)
        self.assertEqual([line.split("\t")[0] for line in lines[:4]], ["1", "2", "3", "4"])
        self.assertEqual(len({line.split("\t")[1] for line in lines[:4]}), 4)
        self.assertTrue(lines[-1].startswith("objective\t"))

    def test_negative_lambda_is_a_usage_error(self):
        with self.assertRaises(CommandError) as cm:
            run("compress", "--lambda", "-1")
        self.assertEqual(cm.exception.returncode, 1)


class BuildGraphCommandTests(CommandTestMixin, SimpleTestCase):
    def test_corpus_smaller_than_default_pool(self):
        path = self.tmp / "graph.tsv"
        lines = run("build_graph", "--num-points", "40", "--clusters", "4", "--out", str(path))
        self.assertTrue(lines[0].startswith("40 nodes, "), lines)
        self.assertEqual(path.read_text(encoding="utf-8").splitlines()[0], "#nodes 40 #dim 2")

    def test_small_dataset_file(self):
        data, path = self.tmp / "points.tsv", self.tmp / "graph.tsv"
        run("generate", "--num-points", "12", "--clusters", "3", "--out", str(data))
        lines = run("build_graph", "--dataset", str(data), "--out", str(path))
        self.assertTrue(lines[0].startswith("12 nodes, "), lines)

    def test_hyphenated_alias(self):
        path = self.tmp / "graph.tsv"
        lines = run("build-graph", "--num-points", "30", "--clusters", "3", "--out", str(path))
        self.assertTrue(lines[0].startswith("30 nodes, "), lines)
        self.assertTrue(path.exists())


class PprCommandTests(CommandTestMixin, SimpleTestCase):
    def test_scores_form_a_distribution(self):
        graph, node = self.make_graph()
        out = self.tmp / "scores.tsv"
        lines = run("ppr", "--graph", str(graph), "--seed-nodes", node, "--out", str(out))
        self.assertEqual(len(lines), 40)
        scores = [float(line.split("\t")[1]) for line in lines]
        self.assertAlmostEqual(sum(scores), 1.0, places=6)
        self.assertEqual(scores, sorted(scores, reverse=True))
        self.assertEqual(out.read_text(encoding="utf-8").splitlines(), lines)

        top = run("ppr", "--graph", str(graph), "--seed-nodes", node, "--top", "3")
        self.assertEqual(top, lines[:3])

    def test_runtime_errors(self):
        graph, node = self.make_graph()
        with self.assertRaises(CommandError) as cm:
            run("ppr", "--graph", str(graph), "--seed-nodes", node, "--max-iter", "1")
        self.assertEqual(cm.exception.returncode, 2)
        self.assertIn("ConvergenceError", str(cm.exception))

        with self.assertRaises(CommandError) as cm:
            run("ppr", "--graph", str(graph), "--seed-nodes", "nope")
        self.assertEqual(cm.exception.returncode, 2)

        with self.assertRaises(CommandError) as cm:
            run("ppr", "--graph", str(self.tmp / "missing.tsv"), "--seed-nodes", node)
        self.assertEqual(cm.exception.returncode, 2)


class ExitCodeTests(CommandTestMixin, SimpleTestCase):
    """
    Через run_from_argv, как при запуске из manage.py.
    """

    def argv(self, *args):
        command = load_command_class("app_semantic_retrieval", "ppr")
        command.stdout._out = StringIO()
        command.stderr._out = StringIO()
        with self.assertRaises(SystemExit) as cm:
            command.run_from_argv(["manage.py", "ppr", "--skip-checks", *args])
        return cm.exception.code

    def test_bad_flag_exits_with_one(self):
        self.assertEqual(self.argv("--no-such-flag"), 1)

    def test_convergence_failure_exits_with_two(self):
        graph, node = self.make_graph()
        self.assertEqual(
            self.argv("--graph", str(graph), "--seed-nodes", node, "--max-iter", "1"), 2
        )


class RetrieveCommandTests(CommandTestMixin, SimpleTestCase):
    def test_dataset_file_and_several_methods(self):
        data = self.tmp / "points.tsv"
        run("generate", "--num-points", "60", "--clusters", "3", "--out", str(data))
        report = self.tmp / "report.csv"
        lines = run(
            "retrieve",
            "--dataset", str(data),
            "--method", "topk_ann",
            "--method", "semantic_compression",
            "--k", "5",
            "--pool-size", "20",
            "--out", str(report),
        )
        self.assertEqual(len(lines), 12)
        self.assertEqual(lines[0], "topk_ann")
        self.assertEqual(lines[6], "semantic_compression")
        csv_lines = report.read_text(encoding="utf-8").splitlines()
        self.assertEqual(csv_lines[0], "method,relevance,diversity,items")
        self.assertEqual(len(csv_lines), 3)

    def test_bad_choice_is_a_usage_error(self):
        with self.assertRaises(CommandError) as cm:
            run("retrieve", "--symbolic-mode", "everything")
        self.assertEqual(cm.exception.returncode, 1)


class ExperimentCommandTests(CommandTestMixin, TestCase):
    def test_save_stores_run_and_results(self):
        lines = run("experiment", "--save")
        self.assertEqual(lines[0].split(), ["method", "relevance", "diversity"])
        self.assertEqual(len(lines), 5)
        self.assertTrue(lines[-1].startswith("Saved as run #"))

        saved = ExperimentRun.objects.get()
        self.assertEqual(saved.symbolic_mode, "sparse")
        self.assertEqual(saved.dataset_seed, 42)
        self.assertEqual(
            sorted(saved.results.values_list("method", flat=True)),
            ["graph_ppr", "semantic_compression", "topk_ann"],
        )
        self.assertEqual(len(saved.results.first().item_ids), 10)

    def test_plot_and_json(self):
        plot, report = self.tmp / "run.svg", self.tmp / "run.json"
        run(
            "experiment",
            "--preset", "dense",
            "--format", "json",
            "--out", str(report),
            "--plot", str(plot),
        )
        self.assertTrue(plot.read_text(encoding="utf-8").lstrip().startswith("<?xml"))
        self.assertIn('"results"', report.read_text(encoding="utf-8"))
        self.assertFalse(ExperimentRun.objects.exists())

    def test_repeated_runs_write_identical_files(self):
        outputs = []
        for name in ("first", "second"):
            report, plot = self.tmp / f"{name}.csv", self.tmp / f"{name}.svg"
            run("experiment", "--out", str(report), "--plot", str(plot))
            outputs.append((report.read_bytes(), plot.read_bytes()))
        self.assertEqual(outputs[0], outputs[1])

    def test_bad_dataset_label_is_a_runtime_error(self):
        data = self.tmp / "points.tsv"
        data.write_text("#nodes 2 #dim 2\na\tx\t1,0\nb\t0\t0,1\n", encoding="utf-8")
        with self.assertRaises(CommandError) as cm:
            run("experiment", "--dataset", str(data))
        self.assertEqual(cm.exception.returncode, 2)
        self.assertIn("DatasetError", str(cm.exception))

    def test_plot_needs_two_dimensions(self):
        with self.assertRaises(CommandError) as cm:
            run("experiment", "--dim", "3", "--plot", str(self.tmp / "run.svg"))
        self.assertEqual(cm.exception.returncode, 2)

    def test_negative_lambda(self):
        with self.assertRaises(CommandError) as cm:
            run("experiment", "--lambda", "-1")
        self.assertEqual(cm.exception.returncode, 1)


class SweepLambdaCommandTests(CommandTestMixin, SimpleTestCase):
    def test_writes_averages(self):
        out = self.tmp / "sweep.csv"
        lines = run("sweep_lambda", "--seeds", "2", "--lambdas", "0,1", "--out", str(out))
        self.assertEqual(len(lines), 3)
        rows = out.read_text(encoding="utf-8").splitlines()
        self.assertEqual(rows[0], "lambda,relevance,diversity,coverage")
        self.assertEqual([row.split(",")[0] for row in rows[1:]], ["0", "1"])

    def test_empty_grid(self):
        with self.assertRaises(CommandError) as cm:
            run("sweep_lambda", "--lambdas", ",")
        self.assertEqual(cm.exception.returncode, 1)

    def test_hyphenated_alias(self):
        out = self.tmp / "sweep.csv"
        lines = run("sweep-lambda", "--seeds", "1", "--lambdas", "0.5", "--out", str(out))
        self.assertEqual(len(lines), 2)
        self.assertEqual(out.read_text(encoding="utf-8").splitlines()[1].split(",")[0], "0.5")
