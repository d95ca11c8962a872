import io
import json
from fractions import Fraction

import pytest

from relexkit.__main__ import main
from relexkit.config import RelexConfig
from relexkit.core.canonical import canonical_form
from relexkit.core.errors import RelexError
from relexkit.core.factory import make_pair_code
from relexkit.core.simplex import SimplexPoint
from relexkit.core.templates import EXIT_ERROR, EXIT_OK, EXIT_ROUNDTRIP_FAILED, SampleCommand, TestExchCommand
from relexkit.tools.io_methods import (dump_model, format_sequence, load_model, model_to_json, parse_sequence,
                                       write_sequence)

from helpers import pair_sequence

pytestmark = pytest.mark.integration


@pytest.fixture
def files(tmp_path, paintbox, pair_sig, calls, partition_trace):
    """常用输入文件：油漆盒模型、退化模型、通话序列、划分序列"""
    paths = {
        'paintbox': str(tmp_path / 'paintbox.json'),
        'fixed': str(tmp_path / 'fixed.json'),
        'calls': str(tmp_path / 'calls.jsonl'),
        'partition': str(tmp_path / 'partition.jsonl'),
    }
    dump_model(paintbox, paths['paintbox'])
    dump_model(SimplexPoint.degenerate(make_pair_code(1, 2), pair_sig), paths['fixed'])
    write_sequence(calls, paths['calls'])
    write_sequence(partition_trace, paths['partition'])
    return paths


def report(capsys):
    return json.loads(capsys.readouterr().out.splitlines()[0])


class TestSample:

    def test_same_seed_same_bytes(self, files, capsys):
        assert main(['sample', '--model', files['paintbox'], '--n', '12', '--seed', '3']) == EXIT_OK
        first = capsys.readouterr().out
        main(['sample', '--model', files['paintbox'], '--n', '12', '--seed', '3'])
        assert capsys.readouterr().out == first
        assert first.splitlines()[0] == '{"format":1,"sig":[1],"n":12}'

    def test_output_is_canonical(self, files, tmp_path):
        out = str(tmp_path / 'x.jsonl')
        assert main(['sample', '--model', files['paintbox'], '--n', '20', '--seed', '1', '--out', out]) == EXIT_OK
        x = parse_sequence(out)
        assert len(x) == 20
        assert canonical_form(x).items == x.items

    def test_summary(self, files, capsys):
        main(['sample', '--model', files['fixed'], '--n', '4', '--seed', '0', '--summary'])
        out = capsys.readouterr().out
        assert 'code' in out and 'frequency' in out

    def test_same_seed_through_pipeline_object(self, files):
        first, second = io.StringIO(), io.StringIO()
        SampleCommand(stdout=first).run(model=files['paintbox'], n=6, seed=9)
        SampleCommand(stdout=second).run(model=files['paintbox'], n=6, seed=9)
        assert first.getvalue() == second.getvalue()


class TestSequenceCommands:

    def test_canon(self, files, capsys, calls_canonical):
        assert main(['canon', '--in', files['calls']]) == EXIT_OK
        assert capsys.readouterr().out == format_sequence(calls_canonical)

    def test_estimate(self, files, capsys):
        assert main(['estimate', '--in', files['partition']]) == EXIT_OK
        model = report(capsys)
        assert model['support'] == {'{1:[(0)]}': '4/7', '{1:[(1)]}': '3/7'}

    def test_estimate_threshold(self, files, capsys):
        main(['estimate', '--in', files['partition'], '--threshold', '4'])
        assert report(capsys)['support'] == {'{1:[(0)]}': '1'}

    def test_estimate_to_file_with_summary(self, files, tmp_path, capsys):
        out = tmp_path / 'fhat.json'
        main(['estimate', '--in', files['calls'], '--out', str(out), '--summary'])
        assert json.loads(out.read_text())['sig'] == [2]
        assert '1/4' in capsys.readouterr().out

    def test_restrict(self, files, capsys):
        assert main(['restrict', '--in', files['calls'], '--n', '2']) == EXIT_OK
        assert capsys.readouterr().out == format_sequence(pair_sequence((1, 2), (3, 1)))

    def test_dist(self, files, tmp_path, capsys):
        other = str(tmp_path / 'other.jsonl')
        write_sequence(pair_sequence((1, 2), (3, 1), (4, 5), (2, 3)), other)
        assert main(['dist', '--a', files['calls'], '--b', other]) == EXIT_OK
        assert report(capsys) == {'distance': '1/4'}

    def test_dist_depth(self, files, tmp_path, capsys):
        other = str(tmp_path / 'other.jsonl')
        write_sequence(pair_sequence((1, 2), (3, 1), (4, 5), (2, 3)), other)
        main(['dist', '--a', files['calls'], '--b', other, '--depth', '3'])
        assert report(capsys) == {'distance': '0'}


class TestRoundtrip:

    def test_success(self, files, capsys):
        assert main(['roundtrip', '--in', files['calls'], '--seed', '5']) == EXIT_OK
        assert report(capsys) == {'roundtrip': True, 'n': 4}

    def test_failure_exit_code(self, files, capsys, mocker):
        check = mocker.patch('relexkit.core.templates.roundtrip_check', return_value=False)
        assert main(['roundtrip', '--in', files['calls']]) == EXIT_ROUNDTRIP_FAILED
        assert report(capsys) == {'roundtrip': False, 'n': 4}
        check.assert_called_once()


class TestExchangeability:

    def test_exact(self, files, capsys):
        assert main(['test-exch', '--model', files['paintbox'], '--n', '3']) == EXIT_OK
        payload = report(capsys)
        assert payload['max_tv'] == '0'
        assert len(payload['per_sigma']) == 6

    def test_exact_summary(self, files, capsys):
        main(['test-exch', '--model', files['paintbox'], '--n', '2', '--summary'])
        out = capsys.readouterr().out
        assert '19/50' in out and '31/50' in out

    def test_mc_report(self, files, tmp_path, capsys):
        out = tmp_path / 'mc.json'
        code = main(['test-exch', '--model', files['fixed'], '--n', '3', '--mode', 'mc', '--samples', '1000',
                     '--seed', '2', '--out', str(out)])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload['sigma'] == [2, 3, 1]
        assert payload['uninformative'] is True
        assert payload['flagged'] is False

    def test_mc_explicit_sigma(self, files, capsys):
        main(['test-exch', '--model', files['fixed'], '--n', '3', '--mode', 'mc', '--sigma', '3,2,1'])
        assert report(capsys)['sigma'] == [3, 2, 1]

    def test_mc_too_few_samples(self, files, capsys):
        code = main(['test-exch', '--model', files['fixed'], '--n', '3', '--mode', 'mc', '--samples', '10'])
        assert code == EXIT_ERROR
        assert json.loads(capsys.readouterr().err)['error'] == 'SampleSizeError'

    def test_unknown_mode(self, paintbox):
        with pytest.raises(RelexError):
            TestExchCommand(stdout=io.StringIO())._execute(paintbox, 2, mode='bootstrap')

    def test_budget_exceeded(self, files, capsys, config_file):
        RelexConfig().reload_config(config_file(enumeration_budget=10))
        assert main(['test-exch', '--model', files['paintbox'], '--n', '3']) == EXIT_ERROR
        assert json.loads(capsys.readouterr().err)['error'] == 'BudgetExceededError'


class TestIngest:

    def test_edges(self, tmp_path, capsys, calls):
        raw = tmp_path / 'calls.txt'
        raw.write_text('7 9\n2 7\n8 4\n7 2\n')
        assert main(['ingest', '--edges', str(raw)]) == EXIT_OK
        assert capsys.readouterr().out == format_sequence(calls)

    def test_edges_canonical(self, tmp_path, capsys, calls_canonical):
        raw = tmp_path / 'calls.txt'
        raw.write_text('7 9\n2 7\n8 4\n7 2\n')
        main(['ingest', '--edges', str(raw), '--canonical'])
        assert capsys.readouterr().out == format_sequence(calls_canonical)

    def test_hyperedges(self, tmp_path):
        raw = tmp_path / 'papers.txt'
        raw.write_text('1 2\n2 3 4\n')
        out = tmp_path / 'papers.jsonl'
        assert main(['ingest', '--hyperedges', str(raw), '--max-size', '4', '--out', str(out)]) == EXIT_OK
        assert parse_sequence(str(out)).sig.to_list() == [1, 2, 3, 4]

    def test_self_loop_reported(self, tmp_path, capsys):
        raw = tmp_path / 'calls.txt'
        raw.write_text('1 1\n')
        assert main(['ingest', '--edges', str(raw)]) == EXIT_ERROR
        assert json.loads(capsys.readouterr().err)['error'] == 'StructureError'

    def test_needs_source(self, capsys):
        assert main(['ingest', '--canonical']) == EXIT_ERROR
        assert json.loads(capsys.readouterr().err)['error'] == 'UsageError'


class TestErrors:

    def test_missing_file(self, tmp_path, capsys):
        assert main(['canon', '--in', str(tmp_path / 'nope.jsonl')]) == EXIT_ERROR
        error = json.loads(capsys.readouterr().err)
        assert error['error'] == 'FileNotFoundError'
        assert 'nope.jsonl' in error['message']

    def test_malformed_model(self, tmp_path, capsys):
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps({'sig': [1], 'support': {'{1:[(1)]}': '1/2'}}))
        assert main(['sample', '--model', str(path), '--n', '3']) == EXIT_ERROR
        assert json.loads(capsys.readouterr().err)['error'] == 'FormatError'

    def test_restrict_out_of_range(self, files, capsys):
        assert main(['restrict', '--in', files['calls'], '--n', '9']) == EXIT_ERROR
        assert json.loads(capsys.readouterr().err)['error'] == 'SequenceMismatchError'

    def test_bad_sigma_argument(self, files, capsys):
        code = main(['test-exch', '--model', files['fixed'], '--n', '3', '--mode', 'mc', '--sigma', 'a,b'])
        assert code == EXIT_ERROR
        error = json.loads(capsys.readouterr().err)
        assert error['error'] == 'UsageError'
        assert 'sigma' in error['message']

    def test_missing_command(self, capsys):
        assert main([]) == EXIT_ERROR
        assert json.loads(capsys.readouterr().err)['error'] == 'UsageError'

    def test_missing_required_option(self, capsys):
        code = main(['sample', '--n', '3'])
        assert code == EXIT_ERROR
        assert code != EXIT_ROUNDTRIP_FAILED
        error = json.loads(capsys.readouterr().err)
        assert error['error'] == 'UsageError'
        assert '--model' in error['message']

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(['--version'])
        assert info.value.code == 0
        assert '1.0.0' in capsys.readouterr().out


def test_weights_survive_model_files(files):
    assert load_model(files['paintbox']).weight('{1:[(1)]}') == Fraction(1, 2)


def test_sample_from_mixture_file_without_signature(tmp_path, capsys, paintbox, coin):
    path = tmp_path / 'mix.json'
    path.write_text(json.dumps({'components': [{'weight': '1/2', 'model': model_to_json(paintbox)},
                                               {'weight': '1/2', 'model': model_to_json(coin)}]}))
    assert main(['sample', '--model', str(path), '--n', '5', '--seed', '4']) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0] == '{"format":1,"sig":[1],"n":5}'
