"""
Unit tests for OutputService using mocks

These tests complement the integration tests in test_output_service.py
by testing the error handling in isolation using mocks.
"""
import pytest
from unittest.mock import Mock, patch
from pathlib import Path

from src.services.output_service import OutputError, OutputService


class TestOutputServiceInit:
    """Test OutputService initialization"""

    def test_init_default(self):
        """Test initialization with default precision"""
        service = OutputService('results')
        assert service.output_dir == Path('results')
        assert service.precision == 17

    def test_init_custom_precision(self):
        """Test initialization with custom precision"""
        service = OutputService('results', precision=6)
        assert service.precision == 6


class TestWriteErrors:
    """Test error handling of the writers"""

    @patch('src.services.output_service.Path.mkdir')
    def test_directory_creation_fails(self, mock_mkdir):
        """Test an unwritable output directory raises OutputError"""
        mock_mkdir.side_effect = PermissionError("read-only")

        service = OutputService('/readonly/results')
        with pytest.raises(OutputError, match="Cannot create output directory"):
            service.write_csv('a.csv', ['x'], [(1,)])

    @patch('src.services.output_service.open', create=True)
    def test_csv_write_fails(self, mock_open, tmp_path):
        """Test a failing file write raises OutputError"""
        mock_open.side_effect = OSError("disk full")

        service = OutputService(tmp_path)
        with pytest.raises(OutputError, match="Failed to write"):
            service.write_csv('a.csv', ['x'], [(1,)])

    @patch('src.services.output_service.open', create=True)
    def test_csv_text(self, mock_open, tmp_path):
        """Test the formatted text handed to the file"""
        handle = mock_open.return_value.__enter__.return_value

        service = OutputService(tmp_path, precision=3)
        path = service.write_csv('a.csv', ['L', 'x'], [(0, 1 / 3)])

        assert path == tmp_path / 'a.csv'
        mock_open.assert_called_once_with(tmp_path / 'a.csv', 'w', newline='')
        handle.write.assert_called_once_with("L,x\n0,0.333\n")

    def test_manifest_write_fails(self, tmp_path):
        """Test a failing manifest save raises OutputError"""
        manifest = Mock()
        manifest.save.side_effect = OSError("disk full")

        service = OutputService(tmp_path)
        with pytest.raises(OutputError, match="Failed to write manifest"):
            service.write_manifest(manifest)
        manifest.save.assert_called_once_with(tmp_path / 'manifest.json')

    def test_manifest_custom_name(self, tmp_path):
        """Test the manifest file name can be chosen"""
        manifest = Mock()
        manifest.save.return_value = tmp_path / 'run.json'

        service = OutputService(tmp_path)
        assert service.write_manifest(manifest, name='run.json') == tmp_path / 'run.json'
        manifest.save.assert_called_once_with(tmp_path / 'run.json')
